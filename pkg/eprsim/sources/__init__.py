from .lockedmode.lockedmodesource import LockedModeSource, locked_mode_source
from .furry.furrysource import FurrySource, furry_source
from .barut.barutsource import BarutSource, barut_source
from .uniform.uniformsource import UniformRandomSource, uniform_random_source


source_list = [
    LockedModeSource,
    FurrySource,
    BarutSource,
    UniformRandomSource,
]

source_classes = {source.model: source for source in source_list}
