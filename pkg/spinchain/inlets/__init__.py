from spinchain.inlets.spectrum_inlet import SpectrumInlet, spec_columns
from spinchain.inlets.roots_inlet import RootsInlet
from spinchain.inlets.evolution_inlet import EvolutionInlet
from spinchain.inlets.sweep_inlets import Fig2Inlet, Fig3Inlet, Fig5Inlet, LDPTableInlet, DoubletInlet
from spinchain.inlets.census_inlets import CensusInlet, BifurcationInlet, ThresholdInlet
