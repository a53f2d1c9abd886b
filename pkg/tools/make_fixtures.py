"""Regenerate the JSON fixtures shipped in diffhopf/fixtures."""

from pathlib import Path

from diffhopf.comodule import Comodule, standard_comodule
from diffhopf.hopf import HopfMorphism, builtin, derived_override
from diffhopf.parser import parse_expr
from diffhopf.reconstruct import Registry
from diffhopf.serialize import RegistryManifest, load_file, serialize

OUT = Path(__file__).resolve().parent.parent / "src" / "diffhopf" / "fixtures"


def write(name, obj):
    path = OUT / name
    path.write_text(serialize(obj), encoding="utf-8")
    return path


def main():
    gm, ga, gl2 = builtin("gm"), builtin("ga"), builtin("gl2")
    e = lambda text, A=gm: parse_expr(text, A)

    write("gm_unipotent.json", Comodule(gm, [[e("1"), e("d(y)/y")], [e("0"), e("1")]],
                                        ["u1", "u2"], "U"))
    write("gm_standard.json", standard_comodule(gm))
    write("broken.json", Comodule(gm, [[e("y"), e("0")], [e("0"), e("d(y)")]], name="Broken"))

    bad = derived_override(ga, "antipode", 0, 0, e("y", ga))
    bad.name = "GaBadAntipode"
    write("ga_bad_antipode.json", bad)
    literal = derived_override(ga, "antipode", 0, 1, e("y", ga))
    literal.name = "GaLiteralAntipode"
    write("ga_literal_antipode.json", literal)

    images = {gl2.gen_index(k): e(v) for k, v in
              {"X11": "1", "X12": "d(y)/y", "X21": "0", "X22": "1"}.items()}
    write("rho_star.json", HopfMorphism(gl2, gm, images, "rho_star"))

    V = load_file(OUT / "gm_standard.json")
    reg = Registry(gm)
    reg.add(V, "V")
    closure = {"dual": 1, "prolong": 2, "tensor": 2}
    reg.close(True, 2, 2)
    write("gm_registry.json", RegistryManifest(reg, closure, {"V": "gm_standard.json"}, []))


if __name__ == "__main__":
    main()
