from pathlib import Path

import pytest

from spcdt import derive_plot_units, load_bundled, parse_tree_text

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
TREE_NAMES = ("wbc_subset", "wbc_full", "iris", "wine", "wbc_split")


def tree_text(name: str) -> str:
    return (DATA_DIR / "trees" / f"{name}.txt").read_text()


@pytest.fixture(scope="session")
def iris():
    return load_bundled("iris")


@pytest.fixture(scope="session")
def wine():
    return load_bundled("wine")


@pytest.fixture(scope="session")
def wbc():
    return load_bundled("wbc")


@pytest.fixture(scope="session")
def trees():
    return {name: parse_tree_text(tree_text(name)) for name in TREE_NAMES}


@pytest.fixture(scope="session")
def datasets(iris, wine, wbc):
    return {"iris": iris, "wine": wine, "wbc": wbc}


def dataset_for(name: str) -> str:
    return {"wbc_subset": "wbc", "wbc_full": "wbc", "iris": "iris",
            "wine": "wine", "wbc_split": "wbc"}[name]


@pytest.fixture(scope="session")
def plans(trees, datasets):
    return {
        name: derive_plot_units(tree, datasets[dataset_for(name)])
        for name, tree in trees.items()
    }
