from .correlationsweep import CorrelationSweepExperiment
from .chshexperiment import ChshExperiment
from .windowsweep import WindowSweepExperiment
from .sicafuzz import SicaFuzzExperiment
from .dichotomicdemo import DichotomicDemoExperiment
from .barutquadrature import BarutQuadratureExperiment


experiment_list = [
    CorrelationSweepExperiment,
    ChshExperiment,
    WindowSweepExperiment,
    SicaFuzzExperiment,
    DichotomicDemoExperiment,
    BarutQuadratureExperiment,
]

experiment_classes = {experiment.name: experiment for experiment in experiment_list}
