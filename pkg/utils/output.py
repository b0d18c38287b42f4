"""
输出文件写入：先写同目录临时文件再重命名，失败时不留下截断文件
"""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def atomic_write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.info("已写入: %s", path)
    return path


def _to_jsonable(obj: Any):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"无法序列化为 JSON: {type(obj)!r}")


def dumps_json(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False, default=_to_jsonable) + "\n"


def write_json(path: Path, data: Dict[str, Any]) -> Path:
    return atomic_write_text(path, dumps_json(data))


def read_json(path: Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def csv_text(rows: Iterable[Sequence[Any]], columns: Sequence[str]) -> str:
    """浮点数用 repr 精度输出，保证重复运行逐字节一致"""
    df = pd.DataFrame(list(rows), columns=list(columns))
    return df.to_csv(index=False, float_format="%.17g", lineterminator="\n")


def write_csv(path: Path, rows: Iterable[Sequence[Any]], columns: Sequence[str]) -> Path:
    return atomic_write_text(path, csv_text(rows, columns))


def curve_rows(acc_mse: Sequence[float]):
    return [(i, float(v)) for i, v in enumerate(acc_mse)]
