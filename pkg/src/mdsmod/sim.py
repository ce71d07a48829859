"""Monte Carlo BER engine.

Frames are simulated in fixed-size blocks. Block ``b`` of SNR point ``i``
draws everything from ``default_rng([seed, i, b])``, in the order data bits,
fading gains, noise. Blocks are consumed in index order and the stop rule is
checked after each one, so the result does not depend on how many worker
threads computed the blocks.

For uncoded runs one frame is one modulation codeword. For coded runs one
frame is one FEC block of ``frame_bits`` data bits, zero terminated, spread
over as many codewords as needed; zero padding fills the last codeword and
is not counted.
"""
from __future__ import annotations

import enum
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import channel
from .detect import detect_streams
from .errors import ConfigurationError
from .fec import CODES, ConvCode, conv_encode, viterbi_hard, viterbi_soft
from .llr import LlrMethod, SpcMethod, compute_llr_frame
from .mds_code import Parity
from .modem import ModemConfig, build_sets, decode_stream, modulate, spectral_efficiency, stream_codebook

log = logging.getLogger(__name__)

UNCODED_BLOCK = 1024
CODED_BLOCK = 4


class Pipeline(enum.Enum):
    UNCODED_ML = "uncoded_ml"
    CODED_HARD = "coded_hard"
    CODED_LC_SOFT = "coded_lc_soft"
    CODED_OPT_SOFT = "coded_opt_soft"
    CODED_LC_SOFT_SPC = "coded_lc_soft_spc"

    @property
    def coded(self) -> bool:
        return self is not Pipeline.UNCODED_ML


@dataclass(frozen=True)
class SimConfig:
    modem: ModemConfig
    pipeline: Pipeline = Pipeline.UNCODED_ML
    snr_db: tuple[float, ...] = ()
    fec: str | None = None
    min_errors: int = 200
    max_frames: int = 200_000
    seed: int = 0
    workers: int = 1
    frame_bits: int = 1024
    spc_method: SpcMethod = SpcMethod.TANH

    def __post_init__(self):
        fec = self.fec
        if fec is None:
            fec = "k7" if self.pipeline.coded else "none"
            object.__setattr__(self, "fec", fec)
        if fec != "none" and fec not in CODES:
            raise ConfigurationError(f"unknown FEC code {fec!r}")
        if self.pipeline.coded and fec == "none":
            raise ConfigurationError(f"pipeline {self.pipeline.value} needs a FEC code")
        if not self.pipeline.coded and fec != "none":
            raise ConfigurationError("the uncoded pipeline takes fec=none")
        if self.min_errors < 1 or self.max_frames < 1:
            raise ConfigurationError("stop rule values must be positive")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if self.frame_bits < 1:
            raise ConfigurationError("frame_bits must be positive")
        # coded pipelines fix the parity rule of the modulation code
        if self.pipeline is Pipeline.CODED_LC_SOFT_SPC:
            object.__setattr__(self, "modem", replace(self.modem, parity=Parity.SPC))
        elif self.pipeline.coded:
            object.__setattr__(self, "modem", replace(self.modem, parity=Parity.MODQ))
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))

    @property
    def code(self) -> ConvCode | None:
        return CODES.get(self.fec)

    @property
    def rate(self) -> float:
        return self.code.rate if self.code else 1.0

    @property
    def eta(self) -> float:
        return spectral_efficiency(self.modem)


@dataclass
class BerRecord:
    pipeline: str
    snr_db: float
    ebn0_db: float
    bits_counted: int
    bit_errors: int
    frames: int
    seed: int
    wall_time: float = 0.0
    redraws: int = 0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_counted

    def sigma(self) -> float:
        """Binomial standard deviation of the BER estimate."""
        p = self.ber
        return float(np.sqrt(max(p * (1 - p), 0.0) / self.bits_counted))


@dataclass
class _Context:
    cfg: SimConfig
    sets: object
    codebook: object = None
    llr_method: LlrMethod | None = None
    cw_per_frame: int = 1
    coded_len: int = 0


def _context(cfg: SimConfig) -> _Context:
    m = cfg.modem
    ctx = _Context(cfg, build_sets(m))
    if cfg.pipeline is Pipeline.CODED_OPT_SOFT:
        ctx.codebook = stream_codebook(m, ctx.sets)
        ctx.llr_method = LlrMethod.OPTIMAL
    elif cfg.pipeline is Pipeline.CODED_LC_SOFT:
        ctx.llr_method = LlrMethod.ELEMENTWISE
    elif cfg.pipeline is Pipeline.CODED_LC_SOFT_SPC:
        ctx.llr_method = LlrMethod.ELEMENTWISE_SPC
    if cfg.pipeline.coded:
        ctx.coded_len = 2 * (cfg.frame_bits + cfg.code.K - 1)
        ctx.cw_per_frame = -(-ctx.coded_len // m.total_bits)
    return ctx


def _channel(s, N0, rng):
    real = channel.transmit(s, N0, rng)
    h, w = real.h, real.w
    bad = np.abs(h) <= channel.H_EPS
    redraws = 0
    while bad.any():
        redraws += int(bad.sum())
        h[bad] = channel.complex_normal(rng, int(bad.sum()))
        bad = np.abs(h) <= channel.H_EPS
    y = h * s + w
    return y / h, np.abs(h) ** 2, redraws


def _hard_bits(yt, gain, ctx: _Context) -> np.ndarray:
    m = ctx.cfg.modem
    classes, ranks, _ = detect_streams(yt, gain, ctx.sets, m)
    return np.concatenate([decode_stream(classes[i], ranks[i], m) for i in range(m.n_streams)], axis=1)


def _simulate_block(ctx: _Context, N0: float, seed: tuple[int, ...], n_frames: int):
    cfg, m = ctx.cfg, ctx.cfg.modem
    rng = np.random.default_rng(list(seed))
    if not cfg.pipeline.coded:
        bits = rng.integers(0, 2, (n_frames, m.total_bits), dtype=np.uint8)
        yt, gain, redraws = _channel(modulate(bits, m, ctx.sets), N0, rng)
        errors = int(np.count_nonzero(_hard_bits(yt, gain, ctx) != bits))
        return bits.size, errors, redraws

    code = cfg.code
    data = rng.integers(0, 2, (n_frames, cfg.frame_bits), dtype=np.uint8)
    padded = np.zeros((n_frames, ctx.cw_per_frame * m.total_bits), dtype=np.uint8)
    for f in range(n_frames):
        padded[f, : ctx.coded_len] = conv_encode(data[f], code)
    words = padded.reshape(n_frames * ctx.cw_per_frame, m.total_bits)
    yt, gain, redraws = _channel(modulate(words, m, ctx.sets), N0, rng)

    if cfg.pipeline is Pipeline.CODED_HARD:
        rx = _hard_bits(yt, gain, ctx).reshape(n_frames, -1)[:, : ctx.coded_len]
        decoded = [viterbi_hard(rx[f], code) for f in range(n_frames)]
    else:
        frame = compute_llr_frame(
            yt, gain, ctx.sets, m, N0, ctx.llr_method, codebook=ctx.codebook, spc_method=cfg.spc_method
        )
        llrs = frame.flat().reshape(n_frames, -1)[:, : ctx.coded_len]
        decoded = [viterbi_soft(llrs[f], code) for f in range(n_frames)]
    errors = int(np.count_nonzero(np.stack(decoded) != data))
    return data.size, errors, redraws


def run_point(cfg: SimConfig, snr_db: float, snr_index: int = 0) -> BerRecord:
    """Simulate one SNR point (symbol SNR ``1/N0`` in dB) until the stop rule fires."""
    start = time.perf_counter()
    ctx = _context(cfg)
    N0 = channel.snr_to_n0(snr_db)
    block = CODED_BLOCK if cfg.pipeline.coded else UNCODED_BLOCK
    n_blocks = -(-cfg.max_frames // block)

    def job(b):
        n = min(block, cfg.max_frames - b * block)
        return n, _simulate_block(ctx, N0, (cfg.seed, snr_index, b), n)

    bits = errors = frames = redraws = 0
    b = 0
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        while b < n_blocks:
            batch = list(range(b, min(b + cfg.workers, n_blocks)))
            done = False
            for n, (nb, ne, nr) in pool.map(job, batch):
                bits += nb
                errors += ne
                frames += n
                redraws += nr
                b += 1
                if errors >= cfg.min_errors:
                    done = True
                    break
            if done:
                break
    if redraws:
        log.warning("redrew %d degenerate fading gains at %.6g dB", redraws, snr_db)
    return BerRecord(
        cfg.pipeline.value,
        float(snr_db),
        channel.ebn0_db(snr_db, cfg.eta, cfg.rate),
        bits,
        errors,
        frames,
        cfg.seed,
        time.perf_counter() - start,
        redraws,
    )


def run_sweep(cfg: SimConfig, out=None) -> list[BerRecord]:
    """Run every SNR point in ascending order; optionally write the CSV to ``out``."""
    from .io import write_csv

    points = sorted(enumerate(cfg.snr_db), key=lambda p: p[1])
    records = [run_point(cfg, snr, i) for i, snr in points]
    if out is not None:
        write_csv(out, cfg, records)
    return records
