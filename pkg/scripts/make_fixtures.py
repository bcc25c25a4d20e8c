"""Regenerate the bundled model files and datasets.

Run from the repository root:

    python3 scripts/make_fixtures.py

Everything is seeded, so reruns reproduce the committed files byte for
byte.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from xinflate.examples import grade_model, risk_list
from xinflate.serialize import ModelFile, save_model
from xinflate.synthetic import bench_dataset, stump_dataset, write_csv
from xinflate.trainer import load_dataset, model_accuracy, train_forest


def main() -> None:
    models = ROOT / "models"
    data = ROOT / "data"
    models.mkdir(exist_ok=True)
    data.mkdir(exist_ok=True)

    clf, space = risk_list()
    save_model(ModelFile("risk-list", space, clf), models / "risk_list.json")
    clf, space = grade_model()
    save_model(ModelFile("grade", space, clf), models / "grade.json")

    names, rows, labels = stump_dataset()
    write_csv(data / "stump.csv", names, rows, labels)

    names, rows, labels = bench_dataset()
    write_csv(data / "bench.csv", names, rows, labels)

    dataset = load_dataset(data / "bench.csv")
    forest = train_forest(dataset, n_trees=25, depth=4, seed=0)
    acc = model_accuracy(forest, dataset)
    save_model(ModelFile("bench-forest", dataset.space, forest), models / "bench_forest.json")
    print(f"bench forest train accuracy: {float(acc):.4f}")
    for path in sorted(models.glob("*.json")) + sorted(data.glob("*.csv")):
        print(f"wrote {path.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
