"""Class-per-directory corpus ingestion with deterministic ordering."""

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidInputError

IMAGE_EXTENSIONS = (".ppm", ".pgm", ".png", ".jpg", ".jpeg")


@dataclass(frozen=True)
class CorpusManifest:
    """Ordered (class_name, image paths) listing plus a content digest.

    Both levels are sorted lexicographically so the same tree always
    produces the same manifest, independent of filesystem traversal order.
    """

    root: Path
    classes: tuple  # ((class_name, (Path, ...)), ...)
    digest: str

    def image_paths(self):
        return [path for _, paths in self.classes for path in paths]

    @property
    def image_count(self):
        return sum(len(paths) for _, paths in self.classes)


def scan_corpus(root):
    """Scan root/<class>/<image> into a manifest; errors on missing root or
    a tree with no class directories."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root {root} does not exist")
    classes = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        images = tuple(
            sorted(
                p
                for p in class_dir.iterdir()
                if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS
            )
        )
        classes.append((class_dir.name, images))
    if not classes:
        raise InvalidInputError(f"corpus root {root} contains no class directories")
    hasher = hashlib.sha256()
    for name, images in classes:
        for path in images:
            hasher.update(f"{name}/{path.name}\n".encode())
    return CorpusManifest(root, tuple(classes), hasher.hexdigest())
