"""
Preset sweeps over power, surface distance, UL user count and benchmark methods.

The SI channel's large-scale gain has no standard value. The
presets use ``FIGURE_FADING``, which evaluates the pathloss of ``S`` at
60 m, the same distance as the UE-to-UE link. That is about 78 dB of
residual self-interference loss after passive isolation. The default
:class:`~risfd.channel.FadingModel` (1 m) stays available for stress runs.
"""

from .channel import FadingModel, Geometry
from .harness import ExperimentSpec, Sweep
from .sysmodel import ScenarioConfig

FIGURE_FADING = FadingModel(si_reference_distance=60.0)
FIGURE_GEOMETRY = Geometry(d_bs_ris=60.0)

MW = 1e-3
POWER_GRID_W = tuple(k * MW for k in range(1, 16))
DISTANCE_GRID_M = tuple(float(d) for d in range(10, 120, 10))
UL_UE_GRID = (1, 2, 3, 4, 5)


def base_config(**changes):
    """N_t = N_r = N = M = 2, K = 4, 1 mW totals, alpha = 0.95."""
    return ScenarioConfig().replace(**changes)


def power_sweep(K=4, trials=500, base_seed=0, methods=("rfic-relaxed", "no-ris"), which="P_D_max"):
    return ExperimentSpec(
        base=base_config(K=K), geometry=FIGURE_GEOMETRY, fading=FIGURE_FADING,
        sweep=Sweep(which, POWER_GRID_W), methods=methods, trials=trials, base_seed=base_seed,
    )


def distance_sweep(K=8, trials=500, base_seed=0, methods=("rfic-relaxed",)):
    return ExperimentSpec(
        base=base_config(K=K), geometry=FIGURE_GEOMETRY, fading=FIGURE_FADING,
        sweep=Sweep("d_bs_ris", DISTANCE_GRID_M), methods=methods, trials=trials,
        base_seed=base_seed,
    )


def ul_ue_sweep(K=4, N_t=2, t_thr=0.0, trials=500, base_seed=0,
                methods=("rfic-relaxed", "rfic-qos")):
    return ExperimentSpec(
        base=base_config(K=K, N_t=N_t, t_thr_U=t_thr, t_thr_D=t_thr),
        geometry=FIGURE_GEOMETRY, fading=FIGURE_FADING,
        sweep=Sweep("N", UL_UE_GRID), methods=methods, trials=trials, base_seed=base_seed,
    )


def benchmark_sweep(K=8, trials=500, base_seed=0,
                    methods=("rfic-relaxed", "no-ris", "random-ris", "null-steering")):
    return ExperimentSpec(
        base=base_config(K=K, P_U_max=1 * MW), geometry=FIGURE_GEOMETRY, fading=FIGURE_FADING,
        sweep=Sweep("P_D_max", POWER_GRID_W), methods=methods, trials=trials,
        base_seed=base_seed,
    )
