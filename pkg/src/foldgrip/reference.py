"""Reference values of the prototype gripper.

``TABLE2_*`` are the theoretical and measured force rows reported for the
prototype (N). ``SNAP_FORCE_REPORTED`` is the reported theoretical snap
force, used only to quantify how far the closed form lands from it.
"""
from importlib import resources

TABLE2_THEORETICAL = {"snap": 23.3, "forward": 6.9, "reverse": 3.6, "motor_limit": 93.2}
TABLE2_MEASURED = {"snap": 23.9, "forward": 6.4, "reverse": 3.3, "motor_limit": 98.8}
TABLE2_FEM = {"snap": 25.0, "forward": 7.5, "reverse": 4.0, "motor_limit": 116.0}

SNAP_FORCE_REPORTED = TABLE2_THEORETICAL["snap"]


def table1_path():
    """Path of the bundled prototype design file."""
    return resources.files("foldgrip") / "data" / "table1.json"


def table1_design():
    """The prototype design as a ``DesignPoint``.

    ``l_low11`` is not among the published parameters; the bundled file sets
    it to 1.0 mm.
    """
    from foldgrip.designfile import load_design

    return load_design(table1_path()).point
