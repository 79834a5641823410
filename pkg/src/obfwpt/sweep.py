"""Power sweeps and their CSV rendering."""
import csv
import math
from dataclasses import dataclass

from . import analytic
from .sim import Scheme, block_tasks, map_tasks, OutageEstimate

CSV_HEADER = (
    "pt_dbm", "ph_dbm", "scheme", "combiner", "coupling", "outage_sim", "ci_halfwidth",
    "outage_analytic", "outage_asymptotic", "trials", "seed", "rare_event_flag",
)


class SweepError(RuntimeError):
    pass


class CsvWriteError(OSError):
    pass


@dataclass(frozen=True)
class SweepRow:
    pt_dbm: float
    ph_dbm: float
    scheme: str
    combiner: str
    coupling: str
    outage_sim: float
    ci_halfwidth: float
    outage_analytic: float | None
    outage_asymptotic: float | None
    trials: int
    seed: int
    rare_event_flag: bool

    @property
    def se(self) -> float:
        return math.sqrt(self.outage_sim * (1.0 - self.outage_sim) / self.trials)


def run_sweep(params, workers: int = 1) -> list:
    """Simulate (and, for 1-bit feedback, evaluate) every sweep point and mode.

    Rows come out ordered by sweep point, then by the configured mode order.
    All blocks of all jobs share one worker pool; counts are integer sums,
    so the result does not depend on ``workers``.
    """
    jobs = [(pt, ph, mode) for pt, ph in params.sweep_points() for mode in params.modes]
    tasks, owners = [], []
    for j, (pt, ph, mode) in enumerate(jobs):
        point = params.at(pt, ph)
        t = block_tasks(point, mode, params.trials, params.seed)
        tasks.extend(t)
        owners.extend([j] * len(t))
    try:
        counts = map_tasks(tasks, workers)
    except Exception as exc:
        raise SweepError(f"simulation failed: {exc}") from exc

    outages = [0] * len(jobs)
    for j, c in zip(owners, counts):
        outages[j] += c

    rows = []
    for (pt, ph, mode), n_out in zip(jobs, outages):
        est = OutageEstimate(n_out, params.trials, params.seed)
        try:
            rows.append(_row(params.at(pt, ph), pt, ph, mode, est))
        except Exception as exc:
            raise SweepError(f"sweep point pt_dbm={pt:g}, ph_dbm={ph:g}, mode={mode}: {exc}") \
                from exc
    return rows


def _row(point, pt, ph, mode, est):
    one_bit = mode.scheme is Scheme.ONE_BIT
    exact = asym = None
    if one_bit:
        inp = point.analytic_inputs()
        exact = analytic.beam_outage(inp, mode.combiner)
        asym = analytic.beam_outage_asymptotic(inp)
    return SweepRow(
        pt_dbm=float(pt), ph_dbm=float(ph), scheme=mode.scheme.value,
        combiner=mode.combiner.value if one_bit else "",
        coupling=mode.coupling.value if one_bit else "",
        outage_sim=est.p_hat, ci_halfwidth=est.ci_halfwidth,
        outage_analytic=exact, outage_asymptotic=asym,
        trials=est.trials, seed=est.seed, rare_event_flag=est.rare_event,
    )


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def emit_csv(rows, sink) -> None:
    """Write rows to a text sink with LF line endings."""
    writer = csv.writer(sink, lineterminator="\n")
    try:
        writer.writerow(CSV_HEADER)
    except OSError as exc:
        raise CsvWriteError(f"failed writing CSV header: {exc}") from exc
    for i, row in enumerate(rows):
        try:
            writer.writerow([_fmt(getattr(row, name)) for name in CSV_HEADER])
        except OSError as exc:
            raise CsvWriteError(f"failed writing CSV row {i}: {exc}") from exc


def read_csv(source) -> list:
    """Parse emitted CSV back into dicts with numeric fields converted."""
    out = []
    for rec in csv.DictReader(source):
        row = dict(rec)
        for k in ("pt_dbm", "ph_dbm", "outage_sim", "ci_halfwidth",
                  "outage_analytic", "outage_asymptotic"):
            row[k] = float(row[k]) if row[k] != "" else None
        for k in ("trials", "seed"):
            row[k] = int(row[k])
        row["rare_event_flag"] = row["rare_event_flag"] == "1"
        out.append(row)
    return out
