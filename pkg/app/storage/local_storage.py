import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

from app.core.config import settings
from app.core.exceptions import InputError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class LocalStorage:
    """
    File system storage for specs, catalogs and reports

    Relative output paths are resolved against a base directory; input paths
    are used as given.
    """

    def __init__(self, base_dir: Optional[PathLike] = None):
        self.base_dir = Path(base_dir if base_dir is not None else settings.OUTPUT_DIR)

    def resolve(self, path: PathLike) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    def read_json(self, path: PathLike) -> Any:
        """
        Read and decode a JSON file

        Args:
            path: File to read

        Returns:
            The decoded document

        Raises:
            InputError: If the file is missing or not valid JSON; the
                location names the file, line and column
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            logger.error(f"Cannot read {path}: {e}")
            raise InputError(f"cannot read file ({e.strerror})", str(path))
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            logger.error(f"Malformed JSON in {path} at line {e.lineno}, column {e.colno}")
            raise InputError(e.msg, f"{path}:{e.lineno}:{e.colno}")

    def write_json(self, data: Any, path: PathLike) -> Path:
        """
        Write a JSON document with stable key order

        Returns:
            The path written
        """
        return self.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", path)

    def write_text(self, text: str, path: PathLike) -> Path:
        target = self.resolve(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {target}")
        return target

    def check_file_exists(self, path: PathLike) -> bool:
        return self.resolve(path).exists()


# Create a singleton instance
storage = LocalStorage()
