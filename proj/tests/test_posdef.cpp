#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gaugelab/errors.hpp"
#include "gaugelab/posdef.hpp"
#include "gaugelab/rng.hpp"
#include "gaugelab/sphere.hpp"

using gaugelab::ArgumentError;
using gaugelab::GramWitness;
using gaugelab::MixtureAtom;
using gaugelab::NormFunction;
using gaugelab::StarBody;

namespace {

std::vector<std::vector<double>> random_points(int m, int n, gaugelab::num::RngStream& rng,
                                               double scale = 1.0) {
    std::vector<std::vector<double>> pts(m, std::vector<double>(n));
    for (auto& p : pts)
        for (auto& v : p) v = scale * rng.uniform(-1.0, 1.0);
    return pts;
}

// Defining integral: mean of cos(r * u_1) over the unit sphere. The level is
// raised for n = 4 so the oracle outresolves cos(20 u_1) oscillations.
double omega_quadrature(int n, double r) {
    return gaugelab::num::sphere_mean(
        n, [r](const double* u) { return std::cos(r * u[0]); }, n == 4 ? 32 : 0);
}

} // namespace

TEST_CASE("omega closed forms") {
    for (int n : {2, 3, 4, 5, 8, 22}) CHECK(gaugelab::omega(n, 0.0) == 1.0);
    // n = 3 reduces to sin(r)/r.
    for (double r : {0.1, 0.3, 1.0, 3.14159, 7.5, 19.0})
        CHECK(gaugelab::omega(3, r) == doctest::Approx(std::sin(r) / r).epsilon(1e-12));
    CHECK(std::fabs(gaugelab::omega(3, std::numbers::pi)) < 1e-15);
    // n = 2 is the order-0 Bessel function; first zero pinned.
    CHECK(std::fabs(gaugelab::omega(2, 2.404825557695773)) < 1e-10);
    // Series/Bessel seam is continuous.
    for (int n : {2, 3, 4, 7})
        CHECK(gaugelab::omega(n, 0.5 - 1e-12) ==
              doctest::Approx(gaugelab::omega(n, 0.5 + 1e-12)).epsilon(1e-11));
    CHECK(gaugelab::omega(4, -3.0) == gaugelab::omega(4, 3.0)); // even
    CHECK_THROWS_AS(gaugelab::omega(1, 1.0), ArgumentError);
    CHECK_THROWS_AS(gaugelab::omega(23, 1.0), ArgumentError);
}

TEST_CASE("omega matches the sphere quadrature oracle") {
    for (int n : {2, 3, 4}) {
        for (double r : {0.0, 0.4, 1.7, 4.9, 8.3, 13.1, 17.7, 20.0}) {
            CAPTURE(n);
            CAPTURE(r);
            CHECK(std::fabs(gaugelab::omega(n, r) - omega_quadrature(n, r)) <= 1e-7);
        }
    }
}

TEST_CASE("schoenberg mixtures") {
    const std::vector<MixtureAtom> one = {{1.0, 1.0}};
    const std::vector<MixtureAtom> half = {{0.0, 0.5}, {1.0, 0.5}};
    for (double t : {0.0, 0.7, 2.9}) {
        CHECK(gaugelab::schoenberg_mixture(3, one, t) == doctest::Approx(gaugelab::omega(3, t)));
        CHECK(gaugelab::schoenberg_mixture(3, half, t) ==
              doctest::Approx(0.5 * (1.0 + gaugelab::omega(3, t))));
    }
    CHECK_THROWS_AS(gaugelab::schoenberg_mixture(3, {{1.0, -0.1}, {2.0, 1.1}}, 1.0),
                    ArgumentError);
    CHECK_THROWS_AS(gaugelab::schoenberg_mixture(3, {{1.0, 0.9}}, 1.0), ArgumentError);
    CHECK_THROWS_AS(gaugelab::schoenberg_mixture(3, {}, 1.0), ArgumentError);
}

TEST_CASE("mixture kernels stay positive semidefinite on the euclidean ball") {
    // Schoenberg representation: any omega mixture must pass the Gram test.
    const auto body = StarBody::lq(3, 2.0);
    const auto f = NormFunction::mixture(3, {{0.5, 0.25}, {1.0, 0.5}, {3.0, 0.25}});
    for (std::uint64_t s = 0; s < 100; ++s) {
        gaugelab::num::RngStream rng(s, 17);
        const auto pts = random_points(10, 3, rng, 2.0);
        CHECK(gaugelab::min_gram_eigenvalue(f, body, pts) >= -1e-8);
    }
}

TEST_CASE("norm function catalog and tags") {
    const auto e1 = NormFunction::exp_pow(1.0);
    CHECK(e1(0.0) == 1.0);
    CHECK(e1(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(e1(-2.5) == e1(2.5));
    CHECK(e1.tag() == "exp_pow:p=1");
    CHECK(NormFunction::exp_pow(0.5).tag() == "exp_pow:p=0.5");
    CHECK_THROWS_AS(NormFunction::exp_pow(0.0), ArgumentError);
    CHECK_THROWS_AS(NormFunction::exp_pow(2.2), ArgumentError);

    const auto om = NormFunction::omega_kernel(3);
    CHECK(om(1.3) == doctest::Approx(std::sin(1.3) / 1.3));
    CHECK(om.tag() == "omega:n=3");

    const auto mix = NormFunction::parse("mixture:n=3,atoms=0:0.5;1:0.5");
    CHECK(mix.tag() == "mixture:n=3,atoms=0:0.5;1:0.5");
    CHECK(mix(2.0) == doctest::Approx(0.5 * (1.0 + std::sin(2.0) / 2.0)));

    CHECK(NormFunction::constant()(123.0) == 1.0);
    CHECK(NormFunction::parse("constant").tag() == "constant");

    for (const char* tag : {"exp_pow:p=1", "omega:n=4", "constant",
                            "mixture:n=2,atoms=1:0.25;2:0.75"}) {
        CAPTURE(tag);
        CHECK(NormFunction::parse(tag).tag() == tag);
    }
    CHECK(NormFunction::parse("exp_pow:p=1.50").tag() == "exp_pow:p=1.5");

    for (const char* bad : {"exp_pow", "exp_pow:q=1", "gauss:p=2", "omega:n=one",
                            "mixture:n=3", "mixture:n=3,atoms=1", "exp_pow:p=3"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(NormFunction::parse(bad), ArgumentError);
    }

    // Sampled bound |f| <= 1 across the catalog.
    gaugelab::num::RngStream rng(3, 3);
    for (const auto& f : {e1, om, mix, NormFunction::exp_pow(2.0)}) {
        for (int i = 0; i < 200; ++i) {
            const double t = rng.uniform(-30.0, 30.0);
            CHECK(std::fabs(f(t)) <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("gram matrix construction") {
    const auto body = StarBody::lq(2, 2.0);
    const auto f = NormFunction::exp_pow(1.0);

    const auto g1 = gaugelab::gram_matrix(f, body, {{0.3, -0.4}});
    REQUIRE(g1.size() == 1);
    CHECK(g1[0] == 1.0);

    const auto g2 = gaugelab::gram_matrix(f, body, {{0.0, 0.0}, {1.0, 0.0}});
    CHECK(g2[0] == 1.0);
    CHECK(g2[3] == 1.0);
    CHECK(g2[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(g2[1] == g2[2]);

    const auto ones =
        gaugelab::gram_matrix(NormFunction::constant(), body, {{0, 0}, {1, 2}, {-3, 1}});
    for (double v : ones) CHECK(v == 1.0);

    CHECK_THROWS_AS(gaugelab::gram_matrix(f, body, {{1.0, 2.0, 3.0}}), ArgumentError);
    CHECK_THROWS_AS(gaugelab::gram_matrix(f, body, {}), ArgumentError);
}

TEST_CASE("gram invariances") {
    gaugelab::num::RngStream rng(99, 0);
    const auto body = StarBody::lq(3, 4.0);
    const auto f = NormFunction::exp_pow(1.5);
    const auto pts = random_points(8, 3, rng);

    const auto g = gaugelab::gram_matrix(f, body, pts);
    // Exact symmetry and unit diagonal.
    for (int i = 0; i < 8; ++i) {
        CHECK(g[i * 8 + i] == 1.0);
        for (int j = 0; j < 8; ++j) CHECK(g[i * 8 + j] == g[j * 8 + i]);
    }

    // Translation invariance (distances only).
    auto shifted = pts;
    for (auto& p : shifted) {
        p[0] += 0.8;
        p[1] -= 2.5;
        p[2] += 11.0;
    }
    const auto gs = gaugelab::gram_matrix(f, body, shifted);
    for (std::size_t k = 0; k < g.size(); ++k)
        CHECK(gs[k] == doctest::Approx(g[k]).epsilon(1e-12));

    // Scale covariance: points scaled by s against f(s t) reproduces the
    // matrix; here exp_pow makes f(s t) explicit.
    const double s = 2.75;
    auto scaled = pts;
    for (auto& p : scaled)
        for (auto& v : p) v *= s;
    const auto gsc = gaugelab::gram_matrix(f, body, scaled);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            std::vector<double> diff(3);
            for (int k = 0; k < 3; ++k) diff[k] = pts[i][k] - pts[j][k];
            const double want = std::exp(-std::pow(s * body.gauge(diff), 1.5));
            CHECK(gsc[i * 8 + j] == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("smallest gram eigenvalue closed forms") {
    const auto body = StarBody::lq(2, 2.0);
    CHECK(gaugelab::min_gram_eigenvalue(NormFunction::exp_pow(1.0), body,
                                        {{0.0, 0.0}, {1.0, 0.0}}) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::fabs(gaugelab::min_gram_eigenvalue(NormFunction::constant(), body,
                                                  {{0, 0}, {1, 1}, {2, -1}})) <= 1e-12);
}

TEST_CASE("gaussian kernel on the euclidean ball never refutes") {
    const auto body = StarBody::lq(3, 2.0);
    const auto f = NormFunction::exp_pow(2.0);
    for (std::uint64_t s = 0; s < 100; ++s) {
        gaugelab::num::RngStream rng(s, 5);
        CHECK(gaugelab::min_gram_eigenvalue(f, body, random_points(10, 3, rng, 2.0)) >= -1e-10);
    }
    // Levy: exp(-t) is positive definite on l2 as well.
    const auto f1 = NormFunction::exp_pow(1.0);
    for (std::uint64_t s = 0; s < 50; ++s) {
        gaugelab::num::RngStream rng(s, 6);
        CHECK(gaugelab::min_gram_eigenvalue(f1, body, random_points(10, 3, rng, 2.0)) >= -1e-10);
    }
}

TEST_CASE("refutation search finds the max-norm witness") {
    const auto body = StarBody::lq(3, std::numeric_limits<double>::infinity());
    const auto f = NormFunction::exp_pow(2.0);
    const auto w = gaugelab::refute_positive_definiteness(f, body, 16, 2000, 1, 1e-6);
    REQUIRE(w.has_value());
    CHECK(w->quadratic_form_value < -1e-6);
    CHECK(w->min_eigenvalue <= w->quadratic_form_value + 1e-9);
    CHECK(w->f_tag == "exp_pow:p=2");
    CHECK(w->body_spec == "lq:n=3,q=inf");
    CHECK(w->seed == 1);
    REQUIRE(w->points.size() == 16);
    REQUIRE(w->coefficients.size() == 16);
    double norm = 0.0;
    for (double c : w->coefficients) norm += c * c;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

    // Witness self-verification: the form recomputes from the stored fields.
    CHECK(gaugelab::recompute_quadratic_form(*w) ==
          doctest::Approx(w->quadratic_form_value).epsilon(1e-10));

    // JSON round-trip preserves every field bit-for-bit.
    const auto text = gaugelab::witness_to_json(*w);
    const auto back = gaugelab::witness_from_json(text);
    CHECK(back.points == w->points);
    CHECK(back.coefficients == w->coefficients);
    CHECK(back.quadratic_form_value == w->quadratic_form_value);
    CHECK(back.min_eigenvalue == w->min_eigenvalue);
    CHECK(back.f_tag == w->f_tag);
    CHECK(back.body_spec == w->body_spec);
    CHECK(back.seed == w->seed);
    CHECK(back.trial == w->trial);
}

TEST_CASE("refutation search reports absence on positive definite instances") {
    // p <= 1 on l4 in the plane embeds in L_p: no witness at any budget.
    CHECK(!gaugelab::refute_positive_definiteness(NormFunction::exp_pow(0.5),
                                                  StarBody::lq(2, 4.0), 12, 10000, 3, 1e-6)
               .has_value());
    CHECK(!gaugelab::refute_positive_definiteness(NormFunction::exp_pow(1.0),
                                                  StarBody::lq(3, 2.0), 10, 2000, 4, 1e-6)
               .has_value());
}

TEST_CASE("witness deserialization rejects malformed input") {
    CHECK_THROWS_AS(gaugelab::witness_from_json("{ not json"), ArgumentError);
    CHECK_THROWS_AS(gaugelab::witness_from_json("{\"points\": [[0,0]]}"), ArgumentError);
    CHECK_THROWS_AS(
        gaugelab::witness_from_json(
            "{\"points\": [[0,0]], \"coefficients\": \"x\", \"value\": -1, "
            "\"min_eigenvalue\": -1, \"f\": \"constant\", \"body\": \"lq:n=2,q=2\", "
            "\"seed\": 0, \"trial\": 0}"),
        ArgumentError);
}
