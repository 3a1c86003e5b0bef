__author__ = "mixprep"
__email__ = "leeward@boundcorp.net"
__version__ = "0.1.0"
