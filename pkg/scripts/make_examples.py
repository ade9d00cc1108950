"""Write the example inputs under data/examples (deterministic)."""

from pathlib import Path

from lsalgebroid.algebroid import AlgebroidStructure
from lsalgebroid.bialgebroid import SymTensor
from lsalgebroid.corpus import abelian, idempotent_point, point_algebra, tangent
from lsalgebroid.presymplectic import PreSymplecticStructure, Subbundle
from lsalgebroid.bialgebroid import BialgebroidCandidate
from lsalgebroid.scalar import Base
from lsalgebroid.serialize import (
    algebroid_to_json,
    dumps,
    presymplectic_to_json,
    subbundle_to_json,
    symmetric_to_json,
)

OUT = Path(__file__).resolve().parent.parent / "data" / "examples"


def write(name, doc):
    (OUT / name).write_text(dumps(doc), encoding="utf-8")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    point = Base(())
    write("abelian.json", algebroid_to_json(abelian(2)))
    write("abelian_dual.json", algebroid_to_json(AlgebroidStructure.abelian(point, 2, dual=True)))
    write("idempotent.json", algebroid_to_json(idempotent_point()))
    write("swap.json", algebroid_to_json(point_algebra(2, {(0, 1): {0: 1}, (1, 0): {1: 1}})))
    write("tangent_R1.json", algebroid_to_json(tangent(("x",))))
    write("tangent_R2.json", algebroid_to_json(tangent(("x1", "x2"))))
    write("H_e1e1.json", symmetric_to_json(SymTensor.from_rows(point, [[1, 0], [0, 0]])))
    write("H_e1e2.json", symmetric_to_json(SymTensor.from_rows(point, [[0, 1], [1, 0]])))
    E = PreSymplecticStructure.from_bialgebroid(BialgebroidCandidate.trivial_dual(idempotent_point()))
    write("double_idempotent.json", presymplectic_to_json(E))
    write("sub_A.json", subbundle_to_json(Subbundle.A(E)))
    write("sub_Astar.json", subbundle_to_json(Subbundle.Astar(E)))
    write("christoffel_R1.json", {"$schema_version": 1, "1,1": {"1": "1"}})
    write("malformed.json", {"$schema_version": 1, "kind": "left-symmetric", "variables": [], "rank": 2,
                             "products": {"1,3": {"1": "1"}}})


if __name__ == "__main__":
    main()
