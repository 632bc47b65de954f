# Estimation de canal compressive pour réseau à relais bidirectionnel
__version__ = "1.0.0"
