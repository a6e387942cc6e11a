"""Smoke test for the rmg Python extension.

Build and install first:
    cd crates/python && maturin develop --release
"""

import math
import os
import tempfile

import rmg


def main():
    src = rmg.Image.synthetic(120, 100, 3)
    filtered = rmg.antialias(src, 5)
    mesh, reference = rmg.simulate_mesh(filtered, 0.5, phi=5, seed=7)
    assert (reference.width, reference.height) == (24, 20)
    assert len(mesh) == 240

    init = rmg.reconstruct(mesh, "lin")
    refined = rmg.refine(mesh, "lin")
    again = rmg.refine(mesh, "lin", params=rmg.ModelParams(214.0, -4.3, 0.6), init=init)
    assert refined == again
    print("LIN psnr init %.3f dB, refined %.3f dB" % (rmg.psnr(init, reference), rmg.psnr(refined, reference)))

    rel = rmg.reliability_map(mesh, 0.6)
    assert len(rel.r) == 24 * 20
    for e, f, r in zip(rel.e_triangle, rel.flatness, rel.r):
        assert abs(r - (0.4 * e + 0.6 * f)) < 1e-12

    p = rmg.ModelParams.default_for("lin")
    assert (p.alpha, p.beta, p.lambda_, p.sigma2_max) == (214.0, -4.3, 0.6, 40.0)
    assert abs(p.strength(0.6) - 214.0 * math.exp(-4.3 * 0.6)) < 1e-9

    assert rmg.psnr(src, src) == math.inf
    assert rmg.denoise_image(init, 0.0) == init
    assert len(rmg.triangulate([(0, 0), (1, 0), (0, 1), (1, 1)])) == 2

    with tempfile.TemporaryDirectory() as d:
        for i in range(2):
            rmg.Image.synthetic(60, 60, i).save(os.path.join(d, "s%d.pgm" % i))
        csv = rmg.evaluate(d, methods=["nnb"], ratios=[0.5])
        lines = csv.strip().split("\n")
        assert lines[0] == "image,method,ratio,seed,psnr_init_db,psnr_rmg_db,gain_db"
        assert len(lines) == 3
        m2 = rmg.Mesh.from_csv(mesh.to_csv(), 24, 20)
        assert m2.samples == mesh.samples

    try:
        rmg.reconstruct(mesh, "cubic")
    except ValueError as e:
        assert "cubic" in str(e)
    else:
        raise AssertionError("unknown method accepted")

    print("rmg", rmg.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
