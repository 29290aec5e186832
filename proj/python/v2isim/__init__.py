"""Vehicle-to-infrastructure downlink simulator.

The compiled extension carries the whole API; this package re-exports it.
"""

from v2isim._core import (  # noqa: F401
    Aggregate,
    ArrayGeometry,
    CampaignSummary,
    MetricsReport,
    RunResult,
    Scenario,
    ScenarioConfig,
    Scheduler,
    SweepCase,
    SweepSpec,
    Tech,
    VehicleResult,
    beam_alignment_probability,
    compute_report,
    config_from_json,
    default_config,
    interarrival_s,
    jain_index,
    link_capacity_bps,
    load_config_file,
    los_probability,
    lower_percentile_mean,
    max_antenna_gain_dbi,
    max_doppler_hz,
    metrics_csv,
    min_antenna_gain_dbi,
    noise_floor_dbm,
    path_loss_db,
    run_campaign,
    run_once,
    run_sweep,
    sample_ppp,
    shadowing_sigma_db,
    sweep_from_json,
    to_json,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
