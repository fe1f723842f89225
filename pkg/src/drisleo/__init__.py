"""Link-level simulator for double-RIS assisted LEO satellite uplinks."""

from .metrics import LinkMetrics, link_metrics, relative_power, required_transmit_power
from .scenario import Architecture, Mode, Scenario, load_scenario, load_scenario_file, table1_defaults
from .sweep import emit_csv, preset_spec, run_point, run_preset, run_sweep

__version__ = "0.1.0"

__all__ = [
    "Architecture",
    "LinkMetrics",
    "Mode",
    "Scenario",
    "emit_csv",
    "link_metrics",
    "load_scenario",
    "load_scenario_file",
    "preset_spec",
    "relative_power",
    "required_transmit_power",
    "run_point",
    "run_preset",
    "run_sweep",
    "table1_defaults",
]
