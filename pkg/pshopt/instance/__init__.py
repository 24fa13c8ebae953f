from .model import Instance
from .loader import load_instance, loads_instance, dumps_instance, instance_from_dict, instance_to_dict
from .validate import validate, require_valid
from .grid import GridSpec, build_grid
from .generator import random_instance
