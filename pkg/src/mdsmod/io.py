"""Sweep CSV files and key=value configuration files.

A sweep CSV starts with ``#`` comment lines. Lines of the form
``# key=value`` hold the full configuration and can be fed back through
:func:`load_config` to reproduce the sweep; the remaining comment lines
state the conventions.
"""
from __future__ import annotations

import csv
from pathlib import Path

from .errors import ConfigurationError
from .llr import SpcMethod
from .mds_code import Mapping
from .modem import ModemConfig, Scheme
from .sim import BerRecord, Pipeline, SimConfig

COLUMNS = ["pipeline", "N", "Q", "M1", "mapping", "snr_db", "ebn0_db", "bits", "errors", "ber", "frames", "seed"]

CONVENTIONS = [
    "symbol energy: unit average energy per complex codeword element (each PAM stream averages 1/2)",
    "snr_db: symbol SNR 1/N0 in dB; ebn0_db = snr_db - 10*log10(eta * rate)",
    "bit order per codeword: [I-index | I-symbols | Q-index | Q-symbols] (PSK: [index | symbols])",
    "channel: i.i.d. CN(0,1) fading per element, CN(0,N0) noise, no interleaver",
    "coded frames: zero-terminated FEC blocks; padding and tail bits excluded from counts",
]

CONFIG_KEYS = [
    "pipeline", "n", "q", "m1", "mapping", "scheme", "fec", "snr_db", "seed",
    "workers", "min_errors", "max_frames", "frame_bits", "spc_method",
]


def _g(x: float) -> str:
    return f"{x:.6g}"


def config_to_dict(cfg: SimConfig) -> dict[str, str]:
    m = cfg.modem
    return {
        "pipeline": cfg.pipeline.value,
        "n": str(m.N),
        "q": str(m.Q),
        "m1": str(m.M1),
        "mapping": m.mapping.value,
        "scheme": m.scheme.value,
        "fec": cfg.fec,
        "snr_db": ",".join(repr(s) for s in cfg.snr_db),
        "seed": str(cfg.seed),
        "workers": str(cfg.workers),
        "min_errors": str(cfg.min_errors),
        "max_frames": str(cfg.max_frames),
        "frame_bits": str(cfg.frame_bits),
        "spc_method": cfg.spc_method.value,
    }


def config_from_dict(values: dict[str, str]) -> SimConfig:
    """Build a config from string values; missing keys take their defaults."""
    unknown = set(values) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    v = dict(values)
    try:
        modem = ModemConfig(
            N=int(v.get("n", 2)),
            Q=int(v.get("q", 4)),
            M1=int(v.get("m1", 1)),
            scheme=Scheme(v.get("scheme", "iqm")),
            mapping=Mapping(v.get("mapping", "gray")),
        )
        snr = v.get("snr_db", "").strip()
        fec = v.get("fec")
        return SimConfig(
            modem,
            pipeline=Pipeline(v.get("pipeline", "uncoded_ml")),
            snr_db=tuple(float(s) for s in snr.split(",") if s.strip()),
            fec=fec if fec else None,
            min_errors=int(v.get("min_errors", 200)),
            max_frames=int(v.get("max_frames", 200_000)),
            seed=int(v.get("seed", 0)),
            workers=int(v.get("workers", 1)),
            frame_bits=int(v.get("frame_bits", 1024)),
            spc_method=SpcMethod(v.get("spc_method", "tanh")),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(str(exc)) from None


def parse_key_values(lines, comment_prefix: bool = False) -> dict[str, str]:
    out = {}
    for raw in lines:
        line = raw.strip()
        if comment_prefix:
            if not line.startswith("#"):
                break
            line = line[1:].strip()
        elif not line or line.startswith("#"):
            continue
        if "=" not in line:
            continue
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if comment_prefix and key not in CONFIG_KEYS:
            continue
        out[key] = value.strip()
    return out


def load_config(path) -> dict[str, str]:
    """Key/value pairs from a plain config file or from a sweep CSV header."""
    path = Path(path)
    text = path.read_text().splitlines()
    is_csv = bool(text) and text[0].startswith("#") and any(line.startswith(COLUMNS[0] + ",") for line in text)
    return parse_key_values(text, comment_prefix=is_csv or path.suffix == ".csv")


def write_csv(path, cfg: SimConfig, records: list[BerRecord]) -> None:
    m = cfg.modem
    path = Path(path)
    try:
        fh = path.open("w", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    with fh:
        fh.write("# mdsmod BER sweep\n")
        for key, value in config_to_dict(cfg).items():
            fh.write(f"# {key}={value}\n")
        fh.write(f"# eta={_g(cfg.eta)} rate={_g(cfg.rate)} parity={m.parity.value}\n")
        for note in CONVENTIONS:
            fh.write(f"# note: {note}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in records:
            writer.writerow([
                r.pipeline, m.N, m.Q, m.M1, m.mapping.value, _g(r.snr_db), _g(r.ebn0_db),
                r.bits_counted, r.bit_errors, _g(r.ber), r.frames, r.seed,
            ])


def read_csv(path) -> list[dict[str, str]]:
    """Data rows of a sweep CSV; raises ValueError when the header is not recognized."""
    with Path(path).open(newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or not set(COLUMNS) <= set(reader.fieldnames):
        raise ValueError(f"{path}: not a sweep CSV (columns {reader.fieldnames})")
    return list(reader)
