"""Experiment runner: drives the engines and writes every output table."""

import json
import logging
import math
import time
import uuid
from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Optional

import numpy as np

from nuresource.core.config import Measure, RunConfig
from nuresource.core.exceptions import ConfigurationError
from nuresource.core.result import (
    ASYMPTOTIC_COLUMNS,
    DIFF_COLUMNS,
    GLOBAL_COLUMNS,
    AsymptoticRow,
    DiffRow,
    EngineResult,
    GlobalRecord,
    RunManifest,
    RunResult,
)
from nuresource.exact import (
    StateVector,
    energy,
    evolve_exact,
    full_sre,
    mass_jz_expectation,
    schmidt_ranks,
    site_spectrum,
)
from nuresource.formatters import PLOT_PRECISION, Formatter, get_formatter
from nuresource.model import initial_state
from nuresource.mps import (
    MpsState,
    bond_ranks,
    build_mpo,
    evolve_mps,
    mpo_expectation,
    mps_from_product,
    single_site_spectrum,
)
from nuresource.observables import (
    SymmetryCheck,
    colocate_resources,
    detect_splits,
    mirror_symmetric,
    pair_symmetry_check,
    polarization,
    stationarity,
    survival_from_polarization,
    to_mass_frame,
)
from nuresource.resources import (
    NAN,
    RECORD_COLUMNS,
    EntanglementSpectrum,
    ResourceRecord,
    antiflatness,
    nl_sre2,
    normalized_entropy,
    phase_region,
    sample_arc,
    von_neumann_entropy,
)
from nuresource.utils.validation import validate_output_dir
from nuresource.version import __version__

logger = logging.getLogger(__name__)

HASH_PREFIX = 12
TANDEM_TOLERANCE = 1e-10

SPLIT_COLUMNS = ("lower_mode", "upper_mode", "delta", "strength")
COLOCATION_COLUMNS = (
    "lower_mode", "upper_mode", "mode", "entropy_global_max", "magic_local_min", "colocated",
)
PHASE_SPACE_COLUMNS = ("mode", "time", "M2NL", "S")
PLOT_COLUMNS = ("time", "mode", "S", "S_norm", "M2NL", "Pz", "Pnu1")
ARC_COLUMNS = ("lambda0", "M2NL", "S")

_SPECTRUM_MEASURES = (Measure.ENTROPY, Measure.NL_SRE2, Measure.ANTIFLATNESS)


@dataclass
class _Collector:
    """Accumulates the snapshots of one engine run."""

    config: RunConfig
    records: list[ResourceRecord] = field(default_factory=list)
    global_records: list[GlobalRecord] = field(default_factory=list)
    pz_series: dict[int, list[float]] = field(default_factory=dict)
    worst_symmetry: Optional[SymmetryCheck] = None

    @property
    def needs_spectrum(self) -> bool:
        return any(self.config.wants(m) for m in _SPECTRUM_MEASURES)

    @property
    def has_resources(self) -> bool:
        return self.config.wants(Measure.ENTROPY) and self.config.wants(Measure.NL_SRE2)

    def add_modes(
        self,
        t: float,
        spectra: Sequence[Optional[EntanglementSpectrum]],
        vectors: Sequence[np.ndarray],
        bond_profile: Sequence[int],
    ) -> list[ResourceRecord]:
        wants = self.config.wants
        theta = self.config.system.mixing_angle
        profile = tuple(int(b) for b in bond_profile)
        batch = []
        for site, (spectrum, vector) in enumerate(zip(spectra, vectors, strict=True)):
            px, py, pz = (float(v) for v in vector)
            # flavor P_z keeps oscillating at the vacuum frequency once mu has decayed
            self.pz_series.setdefault(site, []).append(float(to_mass_frame(vector, theta)[2]))
            batch.append(
                ResourceRecord(
                    time=t,
                    mode=site + 1,
                    entropy=von_neumann_entropy(spectrum) if wants(Measure.ENTROPY) else NAN,
                    nl_sre2=nl_sre2(spectrum) if wants(Measure.NL_SRE2) else NAN,
                    antiflatness4=(
                        4.0 * antiflatness(spectrum) if wants(Measure.ANTIFLATNESS) else NAN
                    ),
                    px=px if wants(Measure.POLARIZATION) else NAN,
                    py=py if wants(Measure.POLARIZATION) else NAN,
                    pz=pz if wants(Measure.POLARIZATION) else NAN,
                    p_nu1=(
                        survival_from_polarization(vector, theta)
                        if wants(Measure.SURVIVAL)
                        else NAN
                    ),
                    bond_profile=profile,
                )
            )
        self.records.extend(batch)
        return batch

    def check_symmetry(self, batch: list[ResourceRecord], spec) -> None:
        check = pair_symmetry_check(batch, spec)
        if self.worst_symmetry is None or check.max_delta > self.worst_symmetry.max_delta:
            self.worst_symmetry = check


class ExperimentRunner:
    """Runs the configured engines and writes their outputs.

    Every output goes to ``<output.directory>/<run_name>-<hash>``, where the
    hash is taken over the resolved configuration, so distinct configs never
    share a directory.
    """

    def __init__(self, config: RunConfig, formatter: Optional[Formatter] = None):
        self.config = config
        self.spec = config.to_system_spec()
        self.formatter = formatter or get_formatter(config.output.format)
        self.config_hash = config.config_hash()
        self.run_id = f"run_{uuid.uuid4().hex[:12]}"
        self.output_dir = (
            config.output_root() / f"{config.output.run_name}-{self.config_hash[:HASH_PREFIX]}"
        )
        self.warnings: list[str] = []
        self._symmetric = mirror_symmetric(self.spec)

    # Orchestration

    def run(self) -> RunResult:
        """Run every configured engine and write the per-engine tables.

        Raises:
            ValidationError: If the output directory is not writable
            NumericalError: If an engine produces non-finite values
        """
        return self._execute(sweep=False)

    def sweep(self) -> RunResult:
        """Run the MPS engine once per bond cap and difference the results.

        Raises:
            ConfigurationError: If fewer than two caps are given or the
                engine does not include mps
        """
        errors = []
        if len(self.config.bond_caps) < 2:
            errors.append(
                f"bond_caps: a sweep needs at least 2 caps, got {len(self.config.bond_caps)}"
            )
        if not self.config.engine.uses_mps:
            errors.append(f"engine: a sweep needs the mps engine, got {self.config.engine.value}")
        if errors:
            raise ConfigurationError("Invalid sweep configuration", errors)
        return self._execute(sweep=True)

    def _execute(self, sweep: bool) -> RunResult:
        start_time = time.perf_counter()
        created_at = datetime.now(timezone.utc).isoformat()
        validate_output_dir(self.output_dir)
        logger.info(
            "Starting run [id=%s, name=%s, N=%d, engine=%s, dir=%s]",
            self.run_id, self.config.output.run_name, self.spec.n_sites,
            self.config.engine.value, self.output_dir,
        )

        engines = self._run_engines()
        mps_results = [e for e in engines if e.engine == "mps"]
        diffs = difference_caps(mps_results, self.config.analysis.entropy_threshold) if sweep else []
        self._report_tandem(diffs)

        manifest = RunManifest(
            run_id=self.run_id,
            run_name=self.config.output.run_name,
            config_hash=self.config_hash,
            version=__version__,
            created_at=created_at,
            config=self.config.resolved(),
        )
        result = RunResult(manifest=manifest, output_dir=self.output_dir, engines=engines, diffs=diffs)
        self._write_outputs(result)

        manifest.wall_time = time.perf_counter() - start_time
        manifest.warnings = list(self.warnings)
        self._write_text("manifest.json", json.dumps(manifest.to_dict(), indent=2) + "\n", manifest)
        logger.info(
            "Run complete [id=%s, engines=%d, files=%d, time=%.2fs]",
            self.run_id, len(engines), len(manifest.files), manifest.wall_time,
        )
        return result

    def _caps(self) -> list[int]:
        return list(self.config.bond_caps) or [self.config.max_bond]

    def _run_engines(self) -> list[EngineResult]:
        engines = []
        reference: Optional[dict[int, StateVector]] = (
            {} if self.config.engine.uses_exact and self.config.engine.uses_mps else None
        )
        if self.config.engine.uses_exact:
            engines.append(self._run_exact(reference))
        if self.config.engine.uses_mps:
            caps = self._caps()
            labels = _cap_labels(caps)
            workers = max(1, min(self.config.workers, len(caps)))
            with ThreadPoolExecutor(max_workers=workers) as pool:
                engines.extend(
                    pool.map(lambda job: self._run_mps(job[0], job[1], reference), zip(caps, labels))
                )
        return engines

    # Exact engine

    def _run_exact(self, reference: Optional[dict[int, StateVector]]) -> EngineResult:
        start = time.perf_counter()
        collector = _Collector(self.config)

        def measure(t: float, step: int, state: StateVector) -> None:
            if reference is not None:
                reference[step] = state
            self._measure_exact(collector, t, state)

        trajectory = evolve_exact(
            initial_state(self.spec), self.spec, self.config.evolution_params(), [measure]
        )
        if trajectory.halvings:
            self.warnings.append(
                f"exact: {trajectory.halvings} steps subdivided to meet the energy tolerance"
            )
        return self._finish(collector, "exact", "exact", None, trajectory.steps, start)

    def _measure_exact(self, collector: _Collector, t: float, state: StateVector) -> None:
        n = state.n_sites
        spectra = [site_spectrum(state, s) if collector.needs_spectrum else None for s in range(n)]
        vectors = [polarization(state, s) for s in range(n)]
        ranks = schmidt_ranks(state)
        batch = collector.add_modes(t, spectra, vectors, ranks)
        if self._symmetric and collector.has_resources:
            collector.check_symmetry(batch, self.spec)

        collector.global_records.append(
            GlobalRecord(
                time=t,
                norm=state.norm(),
                energy=energy(state, self.spec, t),
                mass_jz=mass_jz_expectation(state, self.spec),
                full_sre=self._full_sre(state),
                max_bond=max(ranks, default=1),
            )
        )

    def _full_sre(self, state: StateVector) -> float:
        if not self.config.wants(Measure.FULL_SRE):
            return NAN
        return full_sre(state, 2.0, self.config.workers)

    # MPS engine

    def _run_mps(
        self, cap: int, label: str, reference: Optional[dict[int, StateVector]]
    ) -> EngineResult:
        start = time.perf_counter()
        collector = _Collector(self.config)
        theta = self.spec.mixing_angle

        def measure(t: float, step: int, state: MpsState) -> None:
            n = state.n_sites
            bonds = bond_ranks(state)
            spectra = [
                single_site_spectrum(state, s) if collector.needs_spectrum else None for s in range(n)
            ]
            vectors = [polarization(state, s) for s in range(n)]
            batch = collector.add_modes(t, spectra, vectors, bonds)
            if self._symmetric and collector.has_resources:
                collector.check_symmetry(batch, self.spec)

            dense = None
            if self.config.wants(Measure.FULL_SRE) or reference is not None:
                dense = state.to_dense()
            fidelity = NAN
            if reference is not None and step in reference:
                fidelity = reference[step].fidelity(dense)
            collector.global_records.append(
                GlobalRecord(
                    time=t,
                    norm=state.norm(),
                    energy=mpo_expectation(state, build_mpo(self.spec, t)),
                    mass_jz=0.5 * sum(float(to_mass_frame(v, theta)[2]) for v in vectors),
                    full_sre=self._full_sre(dense) if dense is not None else NAN,
                    fidelity=fidelity,
                    discarded_weight=state.discarded_weight,
                    max_bond=max(bonds, default=1),
                )
            )

        state = mps_from_product(self.spec, cap)
        trajectory = evolve_mps(
            state, self.spec, self.config.evolution_params(), [measure], self.config.truncation(cap)
        )
        logger.info(
            "MPS cap=%d finished [max_bond=%d, discarded=%.3e]",
            cap, trajectory.max_bond_seen, trajectory.discarded_weight,
        )
        return self._finish(collector, label, "mps", cap, trajectory.steps, start)

    # Analysis

    def _finish(
        self,
        collector: _Collector,
        label: str,
        engine: str,
        cap: Optional[int],
        steps: int,
        start: float,
    ) -> EngineResult:
        result = EngineResult(
            label=label,
            engine=engine,
            cap=cap,
            records=collector.records,
            global_records=collector.global_records,
            symmetry=collector.worst_symmetry,
            steps=steps,
        )
        result.asymptotic = self._asymptotic(result, collector)
        final = result.final_records
        if self.config.wants(Measure.SURVIVAL):
            result.splits = detect_splits(
                [r.p_nu1 for r in final], self.config.analysis.weak_threshold
            )
            if collector.has_resources:
                result.colocation = colocate_resources(result.splits, final)
        result.wall_time = time.perf_counter() - start
        return result

    def _asymptotic(self, result: EngineResult, collector: _Collector) -> list[AsymptoticRow]:
        analysis = self.config.analysis
        times = result.times
        rows = []
        unsettled = []
        for record in result.final_records:
            trend = stationarity(
                times,
                collector.pz_series[record.site],
                analysis.stationarity_fraction,
                analysis.stationarity_tolerance,
            )
            if not trend.stationary:
                unsettled.append(record.mode)
            region = (
                phase_region(record.entropy, analysis.entropy_threshold).value
                if math.isfinite(record.entropy)
                else ""
            )
            rows.append(
                AsymptoticRow(
                    mode=record.mode,
                    omega=self.spec.omegas[record.site],
                    entropy=record.entropy,
                    nl_sre2=record.nl_sre2,
                    antiflatness4=record.antiflatness4,
                    pz=record.pz,
                    p_nu1=record.p_nu1,
                    region=region,
                    stationary=trend.stationary,
                    max_rate=trend.max_rate,
                )
            )
        if unsettled:
            message = (
                f"{result.label}: mass-basis P_z not stationary at t_final for modes {unsettled}"
            )
            logger.warning(message)
            self.warnings.append(message)
        return rows

    def _report_tandem(self, diffs: list[DiffRow]) -> None:
        violations = [
            d for d in diffs if d.region == "low_entanglement" and d.tandem is False
        ]
        if violations:
            modes = sorted({d.mode for d in violations})
            message = f"dS and dM2 move in opposite directions in the low-entanglement modes {modes}"
            logger.warning(message)
            self.warnings.append(message)

    # Output

    def _write_outputs(self, result: RunResult) -> None:
        manifest = result.manifest
        for engine in result.engines:
            self._write_engine(engine, manifest)
        arc = sample_arc(self.config.output.arc_points)
        self._write_table("arc", ARC_COLUMNS, arc.tolist(), manifest)
        if result.diffs:
            self._write_table("sweep-diff", DIFF_COLUMNS, [d.as_row() for d in result.diffs], manifest)
        self._write_text("resolved_config.yaml", self.config.to_yaml(), manifest)

    def _write_engine(self, engine: EngineResult, manifest: RunManifest) -> None:
        label = engine.label
        self._write_table(
            f"{label}-records", RECORD_COLUMNS, [r.as_row() for r in engine.records], manifest
        )
        self._write_table(
            f"{label}-global", GLOBAL_COLUMNS, [g.as_row() for g in engine.global_records], manifest
        )
        self._write_table(
            f"{label}-asymptotic", ASYMPTOTIC_COLUMNS, [a.as_row() for a in engine.asymptotic], manifest
        )
        self._write_table(
            f"{label}-plot", PLOT_COLUMNS, plot_rows(engine, self.config.output.plot_points),
            manifest, PLOT_PRECISION,
        )
        phase_space = sorted(
            ((r.mode, r.time, r.nl_sre2, r.entropy) for r in engine.records),
            key=lambda row: (row[0], row[1]),
        )
        self._write_table(f"{label}-phase_space", PHASE_SPACE_COLUMNS, phase_space, manifest)
        if engine.splits is not None:
            self._write_table(
                f"{label}-splits",
                SPLIT_COLUMNS,
                [(b.lower_mode, b.upper_mode, b.delta, b.strength.value) for b in engine.splits.boundaries],
                manifest,
            )
        if engine.colocation:
            self._write_table(
                f"{label}-colocation",
                COLOCATION_COLUMNS,
                [tuple(row.to_dict().values()) for row in engine.colocation],
                manifest,
            )

    def _write_table(
        self,
        stem: str,
        columns: Sequence[str],
        rows: Sequence[Sequence[Any]],
        manifest: RunManifest,
        digits: Optional[int] = None,
    ) -> None:
        kwargs = {} if digits is None else {"digits": digits}
        text = self.formatter.format_table(columns, rows, **kwargs)
        self._write_text(f"{stem}.{self.formatter.extension}", text, manifest)

    def _write_text(self, name: str, text: str, manifest: RunManifest) -> None:
        path = self.output_dir / name
        path.write_text(text, encoding="utf-8", newline="\n")
        if name not in manifest.files:
            manifest.files.append(name)
        logger.debug("Wrote %s (%d bytes)", path, len(text))


def _cap_labels(caps: Sequence[int]) -> list[str]:
    """File-name stems per cap; repeated caps get a running suffix."""
    seen: Counter = Counter()
    labels = []
    for cap in caps:
        seen[cap] += 1
        suffix = "" if seen[cap] == 1 else f"-{seen[cap]}"
        labels.append(f"mps-chi{cap}{suffix}")
    return labels


def plot_rows(engine: EngineResult, max_points: int) -> list[tuple]:
    """Records at no more than ``max_points`` evenly spread snapshot times."""
    times = engine.times
    if not times:
        return []
    picks = np.unique(np.round(np.linspace(0, len(times) - 1, min(len(times), max_points))).astype(int))
    chosen = {times[i] for i in picks}
    return [
        (r.time, r.mode, r.entropy, normalized_entropy(r.entropy), r.nl_sre2, r.pz, r.p_nu1)
        for r in engine.records
        if r.time in chosen
    ]


def difference_caps(results: Sequence[EngineResult], entropy_threshold: float) -> list[DiffRow]:
    """(dS, dM2) per mode between consecutive bond caps.

    The phase region is taken from the larger-cap run (the first of each
    pair). Tandem is whether dS and dM2 share a sign; None when either is
    below 1e-10.
    """
    rows = []
    for before, after in zip(results, results[1:]):
        for a, b in zip(before.asymptotic, after.asymptotic, strict=True):
            d_entropy = b.entropy - a.entropy
            d_magic = b.nl_sre2 - a.nl_sre2
            if math.isnan(d_entropy) or math.isnan(d_magic):
                tandem = None
            elif abs(d_entropy) < TANDEM_TOLERANCE or abs(d_magic) < TANDEM_TOLERANCE:
                tandem = None
            else:
                tandem = (d_entropy > 0) == (d_magic > 0)
            region = (
                phase_region(a.entropy, entropy_threshold).value if math.isfinite(a.entropy) else ""
            )
            rows.append(
                DiffRow(
                    mode=a.mode,
                    cap_from=before.cap or 0,
                    cap_to=after.cap or 0,
                    delta_entropy=d_entropy,
                    delta_nl_sre2=d_magic,
                    region=region,
                    tandem=tandem,
                )
            )
    return rows


def run(config: RunConfig, formatter: Optional[Formatter] = None) -> RunResult:
    """Run an experiment described by ``config``."""
    return ExperimentRunner(config, formatter).run()


def sweep_bond_dims(config: RunConfig, formatter: Optional[Formatter] = None) -> RunResult:
    """Run the bond-cap sweep described by ``config``."""
    return ExperimentRunner(config, formatter).sweep()

