__version__ = '0.2.0'

from spinchain import config

config.initialise()


from spinchain.record import Record
from spinchain.outlet import Outlet
from spinchain.inlet import Inlet
from spinchain.link import Link
from spinchain.link import Update
from spinchain.chain import ChainSpec
