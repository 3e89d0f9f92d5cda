"""Deterministic generator for a steel-plant consumption CSV.

Produces a file with the standard 11-column header (15-minute intervals,
96 per day) for environments where the real measurement export is not
available: usage follows a two-shift weekday production profile, reactive
power and CO2 derive from usage (CO2 is metered coarsely, two decimals),
power factors follow from the active/reactive ratio, and the load-type
label reflects usage bands with noisy boundaries.

    python -m steelpower.synthetic out.csv [--days 365] [--seed 20180101]
"""

from __future__ import annotations

from datetime import date, timedelta

import numpy as np

HEADER = (
    "date,Usage_kWh,Lagging_Current_Reactive.Power_kVarh,"
    "Leading_Current_Reactive_Power_kVarh,CO2(tCO2),"
    "Lagging_Current_Power_Factor,Leading_Current_Power_Factor,"
    "NSM,WeekStatus,Day_of_week,Load_Type"
)

INTERVALS_PER_DAY = 96
LIGHT_BELOW = 25.0
MAXIMUM_FROM = 85.0


def _weekday_profile(hour: np.ndarray) -> np.ndarray:
    """Production intensity in [0, 1] over the hours of a working day."""
    return np.select(
        [hour < 6, hour < 8, hour < 12, hour < 13, hour < 18, hour < 22],
        [0.05,
         0.05 + (hour - 6.0) / 2.0 * 0.85,
         0.90,
         0.58,
         0.90,
         0.50],
        default=0.07,
    )


def generate_rows(n_days: int = 365, seed: int = 20180101,
                  start: date = date(2018, 1, 1)) -> list[str]:
    """CSV lines (header first) for n_days of 15-minute intervals."""
    if n_days < 1:
        raise ValueError(f"n_days must be >= 1, got {n_days}")
    rng = np.random.default_rng(seed)
    n = n_days * INTERVALS_PER_DAY
    day_idx = np.arange(n) // INTERVALS_PER_DAY
    slot = np.arange(n) % INTERVALS_PER_DAY
    nsm = slot * 900
    hour = slot / 4.0

    days = [start + timedelta(days=int(d)) for d in range(n_days)]
    day_names = np.array([d.strftime("%A") for d in days])[day_idx]
    weekend = np.isin(day_names, ("Saturday", "Sunday"))

    profile = np.where(weekend, 0.045, _weekday_profile(hour))
    day_offset = rng.normal(0.0, 0.04, size=n_days)[day_idx]
    jitter = rng.normal(0.0, 0.05, size=n)
    intensity = np.clip(profile + day_offset + jitter, 0.0, 1.2)
    seasonal = 1.0 + 0.08 * np.sin(2.0 * np.pi * (day_idx - 80.0) / 365.0)

    usage = 3.5 + 128.0 * intensity * seasonal + rng.normal(0.0, 1.2, size=n)
    usage = np.round(np.clip(usage, 0.05, None), 2)

    lag_ratio = 0.46 * (1.0 + 0.13 * rng.normal(size=n))
    lagging = usage * lag_ratio + rng.normal(0.0, 1.2, size=n)
    lagging = np.round(np.clip(lagging, 0.0, None), 2)

    idle = intensity < 0.15
    leading = np.where(idle, 1.5 + 3.5 * np.abs(rng.normal(size=n)),
                       0.3 * np.abs(rng.normal(size=n)))
    leading = np.round(np.clip(leading, 0.0, None), 2)

    co2 = 4.23e-4 * usage + rng.normal(0.0, 4e-4, size=n)
    co2 = np.round(np.clip(co2, 0.0, None), 2)  # coarse metering

    pf_lag = 100.0 * usage / np.sqrt(usage**2 + lagging**2 + 1e-9)
    pf_lag = np.round(np.clip(pf_lag + rng.normal(0.0, 2.0, size=n), 1.0, 100.0), 2)
    pf_lead = 100.0 * usage / np.sqrt(usage**2 + leading**2 + 1e-9)
    pf_lead = np.round(np.clip(pf_lead + rng.normal(0.0, 1.0, size=n), 1.0, 100.0), 2)

    band_score = usage + rng.normal(0.0, 10.0, size=n)
    load_type = np.select(
        [band_score < LIGHT_BELOW, band_score < MAXIMUM_FROM],
        ["Light_Load", "Medium_Load"],
        default="Maximum_Load",
    )

    lines = [HEADER]
    for i in range(n):
        stamp = days[day_idx[i]].strftime("%d/%m/%Y")
        hh, mm = divmod(int(nsm[i]) // 60, 60)
        lines.append(
            f"{stamp} {hh:02d}:{mm:02d},{usage[i]:.2f},{lagging[i]:.2f},"
            f"{leading[i]:.2f},{co2[i]:.2f},{pf_lag[i]:.2f},{pf_lead[i]:.2f},"
            f"{int(nsm[i])},{'Weekend' if weekend[i] else 'Weekday'},"
            f"{day_names[i]},{load_type[i]}"
        )
    return lines


def generate_csv(n_days: int = 365, seed: int = 20180101) -> str:
    return "\n".join(generate_rows(n_days=n_days, seed=seed)) + "\n"


def write_csv(path: str, n_days: int = 365, seed: int = 20180101) -> int:
    """Write the synthetic file; returns the number of data rows."""
    lines = generate_rows(n_days=n_days, seed=seed)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
    return len(lines) - 1


def main(argv: list[str] | None = None) -> int:
    import argparse

    parser = argparse.ArgumentParser(
        description="Generate a synthetic steel-plant consumption CSV."
    )
    parser.add_argument("path", help="output CSV path")
    parser.add_argument("--days", type=int, default=365)
    parser.add_argument("--seed", type=int, default=20180101)
    args = parser.parse_args(argv)
    rows = write_csv(args.path, n_days=args.days, seed=args.seed)
    print(f"[info] wrote {rows} rows to {args.path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
