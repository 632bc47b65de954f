
# Schémas Pydantic
from .signal import *
from .channel import *
from .estimate import *
from .sweep import *
from .cli import *
