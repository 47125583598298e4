"""End-to-end acceptance suite.

Each test covers one release criterion and prints a single [PASS]/[FAIL]
line directly to the terminal (bypassing capture) so a full run reads as a
checklist. The suite is slower than the unit tests: it builds a 200-file
synthetic corpus and runs every detector over it, twice for the
antisymmetry and determinism checks.
"""
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest
from scipy.signal import butter, filtfilt

from ompolarity import (
    AudioSignal,
    MomentSignal,
    MomentSpec,
    Polarity,
    SynthSpec,
    compute_oscillating_moment,
    detect_polarity_ompd,
    eval_corpus,
    format_report_text,
    generate,
    make_eval_corpus,
    pc_detect,
    phase_shift_at,
    read_wav,
    report_json_lines,
)
from ompolarity.moments import make_blackman_window, sliding_moment_values, sliding_moment_direct
from ompolarity.ompd import wrap_shift

from conftest import SR

JOBS = 8


@pytest.fixture
def record(capfd):
    """Print one [PASS]/[FAIL] line per criterion straight to the terminal."""

    def _record(criterion: str, passed: bool) -> None:
        verdict = "PASS" if passed else "FAIL"
        with capfd.disabled():
            print(f"[{verdict}] {criterion}", flush=True)
        assert passed, criterion

    return _record


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("acceptance_corpus")
    manifest = make_eval_corpus(200, seed=42, out_dir=out_dir)
    return out_dir, manifest


@pytest.fixture(scope="module")
def ompd_report(corpus):
    _, manifest = corpus
    return eval_corpus(manifest, "ompd", jobs=JOBS)


def test_criterion_1_ompd_corpus_accuracy(record, ompd_report):
    total = ompd_report.total
    record(
        f"criterion 1: OMPD 200-file synthetic corpus accuracy "
        f"{total.ok}/{total.ok + total.ko} (need 200/200)",
        total.ok == 200 and total.ko == 0,
    )


def test_criterion_2_baseline_floors(record, corpus):
    _, manifest = corpus
    pc = eval_corpus(manifest, "pc", jobs=JOBS).total
    rps = eval_corpus(manifest, "rps", jobs=JOBS).total
    record(
        f"criterion 2: baseline floors, PC {pc.accuracy_pct}% and "
        f"RPS {rps.accuracy_pct}% (need >= 90% each)",
        pc.accuracy_pct >= 90.0 and rps.accuracy_pct >= 90.0,
    )


def _antisymmetry_one(args):
    path, method = args
    signal = read_wav(path)
    labels = []
    confidences = []
    for sig in (signal, signal.negated()):
        if method == "ompd":
            result, _ = detect_polarity_ompd(sig)
        elif method == "pc":
            result = pc_detect(sig)
        else:
            from ompolarity import rps_detect

            result = rps_detect(sig)
        labels.append(result.label)
        confidences.append(result.confidence)
    eligible = min(confidences) > 0.5
    flipped = labels[0] is not labels[1]
    return eligible, flipped


@pytest.mark.parametrize("method", ["ompd", "pc", "rps"])
def test_criterion_3_antisymmetry(record, corpus, method):
    out_dir, manifest = corpus
    paths = sorted(out_dir.glob("*.wav"))
    with ProcessPoolExecutor(max_workers=JOBS) as pool:
        outcomes = list(
            pool.map(_antisymmetry_one, [(p, method) for p in paths], chunksize=4)
        )
    eligible = [flipped for ok, flipped in outcomes if ok]
    n_flipped = sum(eligible)
    record(
        f"criterion 3: {method} antisymmetry on negation, "
        f"{n_flipped}/{len(eligible)} eligible files flipped (need all)",
        len(eligible) > 0 and n_flipped == len(eligible),
    )


def test_criterion_4_parity_invariants(record):
    rng = np.random.default_rng(101)
    tight = {(1, 1): 1e-12, (1, 2): 1e-12}
    loose = {(3, 1): 1e-9, (2, 1): 1e-9, (4, 1): 1e-9, (1, 3): 1e-9}
    worst = {pair: 0.0 for pair in {**tight, **loose}}
    for _ in range(50):
        sig = AudioSignal(rng.standard_normal(SR), SR)
        t0 = rng.uniform(1.0 / 300.0, 1.0 / 80.0)
        for (p1, p2), bound in {**tight, **loose}.items():
            spec = MomentSpec(p1, p2)
            y = compute_oscillating_moment(sig, spec, t0).values
            y_neg = compute_oscillating_moment(sig.negated(), spec, t0).values
            sign = -1.0 if spec.polarity_dependent else 1.0
            dev = np.max(np.abs(y_neg - sign * y)) / np.max(np.abs(y))
            worst[(p1, p2)] = max(worst[(p1, p2)], dev)
    ok = all(
        worst[pair] <= bound for pair, bound in {**tight, **loose}.items()
    )
    record(
        "criterion 4: parity invariants on 50 random signals, worst "
        f"relative deviation {max(worst.values()):.2e} "
        "(1e-12 for orders (1,1)/(1,2), 1e-9 otherwise)",
        ok,
    )


def test_criterion_5_oracle_equivalence(record):
    rng = np.random.default_rng(55)

    worst_moment = 0.0
    for _ in range(100):
        n = int(rng.integers(1200, 2400))
        length = 2 * int(rng.integers(25, 200)) + 1
        x = rng.standard_normal(n)
        window = make_blackman_window(length)
        fast = sliding_moment_values(x, window, 1)
        direct = sliding_moment_direct(x, window, 1)
        worst_moment = max(
            worst_moment, np.max(np.abs(fast - direct)) / np.max(np.abs(direct))
        )

    worst_lag = 0.0
    for _ in range(100):
        period = int(rng.integers(60, 200))
        t0 = period / SR
        cutoff = rng.uniform(250.0, 500.0)
        b, a = butter(4, cutoff, "lowpass", fs=SR)
        n = 6 * period + 10
        t = n // 2
        y1 = filtfilt(b, a, rng.standard_normal(n))
        y2 = filtfilt(b, a, rng.standard_normal(n))
        shift = phase_shift_at(
            MomentSignal(y1, MomentSpec(1, 1), SR),
            MomentSignal(y2, MomentSpec(1, 2), SR),
            t,
            t0,
        )
        best_lag, best_val = 0, -np.inf
        half = period
        seg = y1[t - half : t + half]
        for lag in range(-(period // 2), period // 2):
            ref = y2[t - half - lag : t + half - lag]
            val = np.dot(seg, ref) / np.sqrt(np.dot(seg, seg) * np.dot(ref, ref))
            if val > best_val:
                best_lag, best_val = lag, val
        # compare on the integer lag grid: the sub-sample parabolic
        # refinement must stay within one lag step of the exhaustive argmax
        d = shift * period - best_lag
        d = (d + period / 2.0) % period - period / 2.0
        worst_lag = max(worst_lag, abs(round(d)))

    record(
        "criterion 5: oracle equivalence, sliding mean vs direct "
        f"{worst_moment:.2e} (need <= 1e-9) and phase shift vs brute force "
        f"{worst_lag:.3f} lag samples (need <= 1)",
        worst_moment <= 1e-9 and worst_lag <= 1.0,
    )


def test_criterion_6_moments_oscillate_at_f0(record):
    orders = ((1, 1), (2, 1), (3, 1), (4, 1))
    worst_rel = 0.0
    ok = True
    for f0 in (80.0, 120.0, 200.0, 300.0):
        out = generate(SynthSpec(f0_hz=f0, duration_s=1.0, jitter_pct=0.0))
        for p1, p2 in orders:
            y = compute_oscillating_moment(
                out.signal, MomentSpec(p1, p2), 1.0 / f0
            ).values
            spectrum = np.abs(np.fft.rfft(y * np.hanning(y.size)))
            freqs = np.fft.rfftfreq(y.size, 1.0 / SR)
            spectrum[freqs < 50.0] = 0.0
            peak = freqs[np.argmax(spectrum)]
            rel = abs(peak - f0) / f0
            worst_rel = max(worst_rel, rel)
            ok = ok and rel <= 0.05
    record(
        "criterion 6: dominant moment frequency tracks F0 at 80/120/200/300 Hz "
        f"for orders (1,1),(2,1),(3,1),(4,1), worst deviation {100 * worst_rel:.2f}% "
        "(need <= 5%)",
        ok,
    )


def test_criterion_7_negation_displaces_shifts_by_half(record):
    errs = []
    for f0 in (80.0, 120.0, 160.0, 200.0, 240.0, 300.0):
        out = generate(
            SynthSpec(
                f0_hz=f0,
                duration_s=1.0,
                formants=((800.0, 120.0), (1800.0, 150.0)),
            )
        )
        _, dec_pos = detect_polarity_ompd(out.signal)
        _, dec_neg = detect_polarity_ompd(out.signal.negated())
        pos = {d.time_s: d.phase_shift for d in dec_pos}
        neg = {d.time_s: d.phase_shift for d in dec_neg}
        for t in sorted(set(pos) & set(neg)):
            errs.append(abs(wrap_shift(neg[t] - pos[t] - 0.5)))
    mae = float(np.mean(errs))
    record(
        f"criterion 7: negation displaces frame shifts by 0.5 periods, "
        f"MAE {mae:.4f} over {len(errs)} frames (need <= 0.02)",
        len(errs) > 100 and mae <= 0.02,
    )


def test_criterion_8_parallel_determinism(record, corpus, ompd_report):
    _, manifest = corpus
    serial = eval_corpus(manifest, "ompd", jobs=1)
    same = (
        format_report_text(serial) == format_report_text(ompd_report)
        and report_json_lines(serial) == report_json_lines(ompd_report)
    )
    record(
        "criterion 8: eval reports byte-identical for jobs=1 and jobs=8",
        same,
    )
