"""
Plain-text formats.

    kernel CSV      row n holds its n entries in display order (diagonal last), 17 digits
    sequence file   one value per line
    series CSV      header n,t,<series...>; one row per grid point
    plot data       gnuplot blocks "t u" per series, separated by two blank lines
"""
import csv
import logging
from pathlib import Path
from typing import Mapping, Sequence, Union

import numpy as np

from core.exceptions import ShapeError, SpecParseError
from models.kernel import ArrayKernel
from models.trajectory import Trajectory

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _content_lines(path: PathLike) -> list[tuple[int, str]]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise SpecParseError(f"Cannot read {path}: {str(e)}")
    lines = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            lines.append((number, stripped))
    return lines


def _floats(fields: Sequence[str], path: PathLike, number: int) -> list[float]:
    try:
        return [float(x) for x in fields]
    except ValueError:
        raise SpecParseError(f"{path}:{number}: expected numbers, got {','.join(fields)!r}")


def write_kernel_csv(kernel: ArrayKernel, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        for row in kernel.rows():
            writer.writerow([_fmt(x) for x in row])
    logger.info(f"Wrote kernel with {kernel.N} rows to {path}")
    return path


def read_kernel_csv(path: PathLike) -> ArrayKernel:
    rows = []
    for number, line in _content_lines(path):
        rows.append(_floats([x.strip() for x in line.split(",")], path, number))
    if not rows:
        raise SpecParseError(f"{path}: no kernel rows")
    try:
        return ArrayKernel.from_rows(rows)
    except (ShapeError, ValueError) as e:
        raise SpecParseError(f"{path}: {str(e)}")


def read_sequence(path: PathLike) -> np.ndarray:
    values = [_floats([line], path, number)[0] for number, line in _content_lines(path)]
    if not values:
        raise SpecParseError(f"{path}: empty sequence")
    return np.array(values)


def write_series_csv(path: PathLike, t: np.ndarray, series: Mapping[str, np.ndarray]) -> Path:
    """One column per named series over a common grid"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    for name, values in series.items():
        if len(values) != len(t):
            raise ShapeError(f"Series {name!r} has {len(values)} values for {len(t)} grid points")
    fieldnames = ["n", "t", *series.keys()]
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames)
        writer.writeheader()
        for n, t_n in enumerate(t):
            record = {"n": n, "t": _fmt(t_n)}
            record.update({name: _fmt(values[n]) for name, values in series.items()})
            writer.writerow(record)
    return path


def write_trajectory_csv(trajectory: Trajectory, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    steps = {d.n: d for d in trajectory.diagnostics}
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=["n", "t", "u", "iters", "residual"])
        writer.writeheader()
        for n, (t_n, u_n) in enumerate(zip(trajectory.t, trajectory.u)):
            step = steps.get(n)
            writer.writerow({
                "n": n,
                "t": _fmt(t_n),
                "u": _fmt(u_n),
                "iters": step.iterations if step else 0,
                "residual": f"{step.residual:.3e}" if step else f"{0.0:.3e}",
            })
    logger.info(f"Wrote trajectory with {trajectory.N} steps to {path}")
    return path


def read_series_csv(path: PathLike) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Grid and value columns of a trajectory or series CSV; n, iters and residual are dropped"""
    try:
        with Path(path).open(newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or "t" not in reader.fieldnames:
                raise SpecParseError(f"{path}: header with a 't' column expected")
            names = [c for c in reader.fieldnames if c not in ("n", "t", "iters", "residual")]
            if not names:
                raise SpecParseError(f"{path}: no series columns")
            t, columns = [], {name: [] for name in names}
            for number, record in enumerate(reader, start=2):
                t.append(_floats([record["t"]], path, number)[0])
                for name in names:
                    columns[name].append(_floats([record[name] or ""], path, number)[0])
    except OSError as e:
        raise SpecParseError(f"Cannot read {path}: {str(e)}")
    if not t:
        raise SpecParseError(f"{path}: empty series")
    return np.array(t), {name: np.array(values) for name, values in columns.items()}


def write_plotdata(path: PathLike, t: np.ndarray, series: Mapping[str, np.ndarray]) -> Path:
    """gnuplot data with one index block per series: plot 'file' index i using 1:2"""
    if not series:
        raise ShapeError("No series to write")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blocks = []
    for name, values in series.items():
        if len(values) == 0:
            raise ShapeError(f"Series {name!r} is empty")
        if len(values) != len(t):
            raise ShapeError(f"Series {name!r} has {len(values)} values for {len(t)} grid points")
        lines = [f"# {name}"] + [f"{_fmt(t_n)} {_fmt(u_n)}" for t_n, u_n in zip(t, values)]
        blocks.append("\n".join(lines))
    path.write_text("\n\n\n".join(blocks) + "\n")
    return path


def read_plotdata(path: PathLike) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise SpecParseError(f"Cannot read {path}: {str(e)}")
    result = {}
    for index, block in enumerate(b for b in text.split("\n\n\n") if b.strip()):
        lines = block.strip().splitlines()
        name = lines[0][1:].strip() if lines[0].startswith("#") else f"series{index}"
        pairs = [_floats(line.split(), path, 0) for line in lines if not line.startswith("#")]
        data = np.array(pairs)
        result[name] = (data[:, 0], data[:, 1])
    return result


def load_kernel_source(source: str, steps: Union[int, None] = None, seed: Union[int, None] = None) -> ArrayKernel:
    """
    file:PATH              kernel CSV
    fode:ALPHA,MESHSPEC    FODE kernel, e.g. fode:0.6,geom:0.01,1.2,30
    """
    from models.fode import FodeKernelSpec
    from services.fode import fode_kernel
    from services.mesh import assert_resolvable, parse_mesh_spec

    kind, sep, body = source.strip().partition(":")
    kind = kind.lower()
    if kind == "file" and sep:
        return read_kernel_csv(body)
    if kind == "fode" and sep:
        alpha_text, comma, mesh_spec = body.partition(",")
        if not comma:
            raise SpecParseError(f"Kernel source must look like fode:ALPHA,MESHSPEC, got {source!r}")
        try:
            alpha = float(alpha_text)
        except ValueError:
            raise SpecParseError(f"Bad alpha {alpha_text!r} in {source!r}")
        if not 0.0 < alpha <= 1.0:
            raise SpecParseError(f"alpha must lie in (0, 1], got {alpha}")
        mesh = assert_resolvable(parse_mesh_spec(mesh_spec, steps=steps, seed=seed))
        return fode_kernel(FodeKernelSpec(alpha=alpha, mesh=mesh))
    raise SpecParseError(f"Unknown kernel source {source!r}; expected file:PATH or fode:ALPHA,MESHSPEC")
