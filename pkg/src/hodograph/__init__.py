"""Kepler orbits from hodographs: director circles, the LRL vector and the
circle-to-circle maps between momentum space and the orbit plane."""

from .conics import ConicClass, ConicGeometry, director_circles, distance_point_to_circle, gardener_statistic, tangent_pedal_products
from .constructions import (
    ConstructionTrace,
    envelope_orbit,
    feynman_map,
    second_focus_chord,
    streamlined_map,
    vhh_construct,
)
from .geom2d import Circle, Line, Vec2, fit_circle, star
from .kepler import (
    Hodograph,
    KeplerState,
    OrbitElements,
    elements_from_state,
    hodograph,
    lrl_residual,
    momentum_from_position,
    rk4_trajectory,
    sample_orbit,
)
from .scenarios import BUILTIN, Scenario
from .verify import CheckReport, run_suite

__version__ = "0.1.0"
