#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "plapsys/barenblatt.hpp"
#include "plapsys/field.hpp"
#include "plapsys/field_io.hpp"
#include "plapsys/grid.hpp"
#include "plapsys/params.hpp"

using namespace plapsys;

namespace {

VectorField randomSmoothField(const Grid& g, int k, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    VectorField f(g, k);
    for (int l = 0; l < k; ++l)
        for (auto& v : f.comp[l]) v = uni(rng);
    // one smoothing pass so gradients are tame
    for (int l = 0; l < k; ++l) {
        auto s = f.comp[l];
        for (int ix = 1; ix + 1 < g.cells[0]; ++ix)
            for (int iy = 0; iy < g.cells[1]; ++iy)
                f.comp[l][g.index(ix, iy)] =
                    (s[g.index(ix - 1, iy)] + s[g.index(ix, iy)] +
                     s[g.index(ix + 1, iy)]) /
                    3.0;
    }
    return f;
}

}  // namespace

TEST_CASE("params validation") {
    CHECK_THROWS(SystemParams(2.0, 1, 1));
    CHECK_THROWS(SystemParams(3.0, 3, 1));
    CHECK_THROWS(SystemParams(3.0, 1, 0));
    CHECK_THROWS(SystemParams(3.0, 1, 1, -1.0));
    CHECK_NOTHROW(SystemParams(2.5, 2, 3, 0.01));
}

TEST_CASE("grid geometry") {
    const Grid g = Grid::make1d(10, 5.0);
    CHECK(g.h[0] == doctest::Approx(1.0));
    CHECK(g.center(0, 0) == doctest::Approx(-4.5));
    CHECK(g.center(0, 9) == doctest::Approx(4.5));
    const Grid g2 = Grid::make2d(8, 4, 2.0);
    CHECK(g2.h[0] == doctest::Approx(0.5));
    CHECK(g2.h[1] == doctest::Approx(1.0));
    CHECK(g2.cell_count() == 32);
}

TEST_CASE("gradient of constant field is zero") {
    const Grid g = Grid::make2d(16, 16, 1.0);
    VectorField f(g, 2);
    for (auto& c : f.comp)
        for (auto& v : c) v = 3.7;
    const FaceField gr = gradient(f, 0);
    for (int d = 0; d < g.dim; ++d)
        for (double v : gr.dir[d]) CHECK(v == 0.0);
}

TEST_CASE("gradient exact for linear 1d data on interior faces") {
    const Grid g = Grid::make1d(32, 2.0);
    VectorField f(g, 1);
    for (int i = 0; i < 32; ++i) f.comp[0][i] = g.center(0, i);
    const FaceField gr = gradient(f, 0);
    for (int i = 1; i < 32; ++i)
        CHECK(gr.dir[0][i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gr.dir[0][0] == 0.0);
    CHECK(gr.dir[0][32] == 0.0);
}

TEST_CASE("gradient out of range component") {
    const Grid g = Grid::make1d(8, 1.0);
    VectorField f(g, 1);
    CHECK_THROWS(gradient(f, 1));
    CHECK_THROWS(gradient(f, -1));
}

TEST_CASE("gradient matches the closed-form profile derivative at O(h^2)") {
    // d/d|x| of the source profile, differentiated by hand
    const BarenblattProfile prof = makeProfile(1.0, 3.0, 1);
    const double t = 1.0;
    auto exact_deriv = [&](double x) {
        const double p = prof.p, a2 = prof.a2, a1 = prof.a1;
        const double q = p / (p - 1.0), r = (p - 1.0) / (p - 2.0);
        const double cp = prof.physicalConstant();
        const double k = (p - 2.0) / p * std::pow(a2, 1.0 / (p - 1.0));
        const double arg = cp - k * std::pow(std::abs(x) / std::pow(t, a2), q);
        if (arg <= 0.0) return 0.0;
        const double sign = x >= 0.0 ? 1.0 : -1.0;
        return sign * std::pow(t, -a1) * r * std::pow(arg, r - 1.0) *
               (-k * q * std::pow(std::abs(x), q - 1.0) /
                std::pow(t, a2 * q));
    };
    auto max_err = [&](int cells) {
        const Grid g = Grid::make1d(cells, 4.0);
        const VectorField f = sampleProfile(prof, g, t);
        const FaceField gr = gradient(f, 0);
        const double inner = 0.5 * prof.supportRadius(t);
        double err = 0.0;
        for (int i = 1; i < cells; ++i) {
            const double x = -g.half_extent + i * g.h[0];  // face location
            // stay away from the free boundary and from the |x|^(3/2) kink
            // at the origin, where the third derivative blows up
            if (std::abs(x) > inner || std::abs(x) < 0.5) continue;
            err = std::max(err, std::abs(gr.dir[0][i] - exact_deriv(x)));
        }
        return err;
    };
    const double e1 = max_err(200), e2 = max_err(400);
    CHECK(e1 / e2 > 3.0);  // second order
}

TEST_CASE("system gradient norm reductions") {
    const Grid g = Grid::make1d(64, 3.0);
    VectorField f = randomSmoothField(g, 1, 11);
    const FaceField gr = gradient(f, 0);
    const FaceField th = systemGradientNorm(f);
    for (std::size_t i = 0; i < th.dir[0].size(); ++i)
        CHECK(th.dir[0][i] == doctest::Approx(std::abs(gr.dir[0][i])).epsilon(1e-14));
}

TEST_CASE("system gradient norm with proportional components") {
    // u2 = 3 u1  ->  norm = sqrt(10) |grad u1|
    const Grid g = Grid::make2d(24, 24, 2.0);
    VectorField f = randomSmoothField(g, 1, 5);
    VectorField f2(g, 2);
    f2.comp[0] = f.comp[0];
    f2.comp[1] = f.comp[0];
    for (auto& v : f2.comp[1]) v *= 3.0;
    const FaceField th1 = systemGradientNorm(f);
    const FaceField th2 = systemGradientNorm(f2);
    for (int d = 0; d < 2; ++d)
        for (std::size_t i = 0; i < th1.dir[d].size(); ++i)
            CHECK(th2.dir[d][i] ==
                  doctest::Approx(std::sqrt(10.0) * th1.dir[d][i]).epsilon(1e-12));
}

TEST_CASE("system gradient norm dominates each directional entry") {
    const Grid g = Grid::make2d(16, 16, 2.0);
    VectorField f = randomSmoothField(g, 2, 77);
    const FaceField th = systemGradientNorm(f);
    for (int l = 0; l < 2; ++l) {
        const FaceField gr = gradient(f, l);
        for (int d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < th.dir[d].size(); ++i)
                CHECK(th.dir[d][i] >= std::abs(gr.dir[d][i]) - 1e-14);
    }
}

TEST_CASE("system gradient norm is homogeneous of degree 1") {
    const Grid g = Grid::make1d(48, 2.0);
    VectorField f = randomSmoothField(g, 3, 9);
    VectorField fs = f;
    for (auto& c : fs.comp)
        for (auto& v : c) v *= 2.5;
    const FaceField a = systemGradientNorm(f);
    const FaceField b = systemGradientNorm(fs);
    for (std::size_t i = 0; i < a.dir[0].size(); ++i)
        CHECK(b.dir[0][i] == doctest::Approx(2.5 * a.dir[0][i]).epsilon(1e-13));
}

TEST_CASE("l1 mass basics") {
    const Grid g = Grid::make1d(4, 1.0);  // h = 0.5
    VectorField f(g, 1);
    CHECK(l1Mass(f).masses[0] == 0.0);
    CHECK(l1Mass(f).total_norm == 0.0);
    f.comp[0][2] = 1.0;
    CHECK(l1Mass(f).masses[0] == doctest::Approx(0.5));
}

TEST_CASE("l1 mass additive and linear") {
    const Grid g = Grid::make1d(20, 1.0);
    VectorField a(g, 1), b(g, 1);
    a.comp[0][3] = 2.0;
    b.comp[0][15] = 1.5;
    VectorField sum(g, 1);
    for (int i = 0; i < 20; ++i)
        sum.comp[0][i] = a.comp[0][i] + b.comp[0][i];
    CHECK(l1Mass(sum).masses[0] ==
          doctest::Approx(l1Mass(a).masses[0] + l1Mass(b).masses[0]));
}

TEST_CASE("l1 mass of sampled profile approaches the target under refinement") {
    const BarenblattProfile prof = makeProfile(1.0, 3.0, 1);
    auto mass_err = [&](int cells) {
        const Grid g = Grid::make1d(cells, 4.0);
        return std::abs(l1Mass(sampleProfile(prof, g, 1.0)).masses[0] - 1.0);
    };
    const double e1 = mass_err(250), e2 = mass_err(500);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 > 1.5);
}

TEST_CASE("lp norms") {
    const Grid g = Grid::make1d(2, 1.0);
    VectorField f(g, 1);
    CHECK(lpNorm(f, 0, 2.0) == 0.0);
    const Grid g1 = Grid::make1d(2, 1.0);
    VectorField f1(g1, 1);
    f1.comp[0][0] = 2.0;
    // h = 1: (1 * 2^2)^(1/2) = 2
    CHECK(lpNorm(f1, 0, 2.0) == doctest::Approx(2.0));
    CHECK(linfNorm(f1) == 2.0);
    CHECK_THROWS(lpNorm(f1, 0, 0.5));
}

TEST_CASE("l1 mass equals L1 norm for nonnegative fields") {
    const Grid g = Grid::make1d(32, 2.0);
    VectorField f = randomSmoothField(g, 2, 3);
    for (int l = 0; l < 2; ++l)
        CHECK(lpNorm(f, l, 1.0) == doctest::Approx(l1Mass(f).masses[l]));
}

TEST_CASE("snapshot round trip") {
    const Grid g = Grid::make2d(6, 5, 1.5);
    VectorField f = randomSmoothField(g, 2, 1234);
    f.time = 0.7431298;
    std::stringstream ss;
    writeSnapshot(ss, f);
    const VectorField back = readSnapshot(ss);
    CHECK(back.grid == f.grid);
    CHECK(back.time == f.time);
    REQUIRE(back.k() == f.k());
    for (int l = 0; l < f.k(); ++l)
        for (std::size_t i = 0; i < f.comp[l].size(); ++i)
            CHECK(back.comp[l][i] == f.comp[l][i]);
}

TEST_CASE("snapshot rejects bad header") {
    std::stringstream ss("garbage v1 n=1\n");
    CHECK_THROWS(readSnapshot(ss));
}
