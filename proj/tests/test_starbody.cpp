#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <vector>

#include "gaugelab/errors.hpp"
#include "gaugelab/rng.hpp"
#include "gaugelab/starbody.hpp"

using gaugelab::ArgumentError;
using gaugelab::OrliczFunction;
using gaugelab::StarBody;
using gaugelab::UnsupportedOperation;

namespace {

std::vector<double> random_point(int n, gaugelab::num::RngStream& rng) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(-2.0, 2.0);
    return x;
}

// Representative body zoo for the property tests.
std::vector<StarBody> body_zoo() {
    std::vector<StarBody> zoo;
    zoo.push_back(StarBody::lq(2, 0.7));
    zoo.push_back(StarBody::lq(3, 1.0));
    zoo.push_back(StarBody::lq(3, 4.0));
    zoo.push_back(StarBody::lq(4, std::numeric_limits<double>::infinity()));
    zoo.push_back(StarBody::orlicz(3, OrliczFunction::poly(3.0)));
    zoo.push_back(StarBody::qsum(StarBody::lq(3, 2.0), StarBody::lq(1, 2.0), 3.0));
    zoo.push_back(StarBody::image(3, {2.0, 0.5, 0.0, 0.0, 1.0, -0.25, 0.0, 0.0, 1.5}));
    zoo.push_back(StarBody::synth2d({0.0, std::numbers::pi / 2}, {0.5, 0.5}, 0.0));
    return zoo;
}

} // namespace

TEST_CASE("gauge closed forms") {
    CHECK(StarBody::lq(2, 2.0).gauge({3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(StarBody::lq(3, std::numeric_limits<double>::infinity()).gauge({1.0, -2.0, 0.5}) == 2.0);
    CHECK(StarBody::lq(3, 1.0).gauge({1.0, -2.0, 0.5}) == doctest::Approx(3.5).epsilon(1e-15));
    // Orlicz M(t)=t^4 reproduces the l4 norm: at (1,1) the gauge is 2^(1/4).
    const auto o4 = StarBody::orlicz(2, OrliczFunction::poly(4.0));
    CHECK(o4.gauge({1.0, 1.0}) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-10));
    CHECK(StarBody::lq(2, 4.0).gauge({1.0, 1.0}) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("orlicz gauge solves the implicit equation") {
    const auto m4 = OrliczFunction::poly(4.0);
    const auto m2 = OrliczFunction::poly(2.0);
    const double e1[2] = {1.0, 0.0};
    CHECK(gaugelab::orlicz_gauge(m4, e1, 2, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
    const double x34[2] = {3.0, 4.0};
    CHECK(gaugelab::orlicz_gauge(m2, x34, 2, 1e-12) == doctest::Approx(5.0).epsilon(1e-10));
    const double x11[2] = {1.0, 1.0};
    CHECK(gaugelab::orlicz_gauge(m4, x11, 2, 1e-12) ==
          doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-10));

    const double zero[2] = {0.0, 0.0};
    CHECK_THROWS_AS(gaugelab::orlicz_gauge(m4, zero, 2, 1e-12), ArgumentError);

    // Postcondition: the defining sum sits at 1 within tol.
    gaugelab::num::RngStream rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        double x[3];
        for (auto& v : x) v = rng.uniform(-3.0, 3.0);
        if (std::fabs(x[0]) + std::fabs(x[1]) + std::fabs(x[2]) < 1e-6) continue;
        const double s = gaugelab::orlicz_gauge(m4, x, 3, 1e-12);
        double sum = 0.0;
        for (double v : x) sum += std::pow(std::fabs(v) / s, 4.0);
        CHECK(std::fabs(sum - 1.0) <= 1e-11);
    }
}

TEST_CASE("orlicz poly gauges match lq gauges") {
    gaugelab::num::RngStream rng(77, 1);
    for (double q : {1.0, 2.0, 4.0}) {
        const auto ob = StarBody::orlicz(3, OrliczFunction::poly(q));
        const auto lb = StarBody::lq(3, q);
        for (int trial = 0; trial < 40; ++trial) {
            const auto x = random_point(3, rng);
            CAPTURE(q);
            CHECK(ob.gauge(x) == doctest::Approx(lb.gauge(x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("q-sum gauge arithmetic") {
    const auto x3 = StarBody::lq(3, 2.0);
    const auto r1 = StarBody::lq(1, 2.0);
    CHECK(gaugelab::qsum_gauge(x3, r1, 3.0, {1.0, 1.0, 1.0}, {0.0}) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(gaugelab::qsum_gauge(x3, r1, 3.0, {1.0, 1.0, 1.0}, {1.0}) ==
          doctest::Approx(std::cbrt(3.0 * std::sqrt(3.0) + 1.0)).epsilon(1e-14));
    // q = 1 adds the component gauges: 2 + 3 = 5.
    const auto x2 = StarBody::lq(2, 2.0);
    CHECK(gaugelab::qsum_gauge(x2, r1, 1.0, {2.0, 0.0}, {3.0}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(gaugelab::qsum_gauge(x2, r1, 0.5, {1.0, 0.0}, {1.0}), ArgumentError);
    CHECK_THROWS_AS(StarBody::qsum(x2, r1, 0.99), ArgumentError);
}

TEST_CASE("euclidean sandwich bounds") {
    for (int n : {2, 3, 4}) {
        const auto [c, d] = StarBody::lq(n, 2.0).euclid_bounds(500);
        CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto [c1, d1] = StarBody::lq(2, 1.0).euclid_bounds(4000);
    CHECK(c1 == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(d1 == doctest::Approx(std::numbers::sqrt2).epsilon(1e-3));
    const auto [ci, di] =
        StarBody::lq(3, std::numeric_limits<double>::infinity()).euclid_bounds(4000);
    CHECK(ci == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
    CHECK(di == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(StarBody::lq(2, 2.0).euclid_bounds(99), ArgumentError);
}

TEST_CASE("euclid_bounds really sandwich the gauge") {
    gaugelab::num::RngStream rng(5150, 0);
    for (const auto& body : body_zoo()) {
        if (body.kind() == gaugelab::BodyKind::synth2d) continue; // gauge can dip to 0
        const auto [c, d] = body.euclid_bounds(2000);
        REQUIRE(c > 0.0);
        REQUIRE(d >= c);
        for (int trial = 0; trial < 10000; ++trial) {
            const auto x = random_point(body.dimension(), rng);
            double ss = 0.0;
            for (double v : x) ss += v * v;
            const double r = std::sqrt(ss);
            if (r < 1e-9) continue;
            const double g = body.gauge(x);
            CHECK(g >= (c - 1e-6) * r);
            CHECK(g <= (d + 1e-6) * r);
        }
    }
}

TEST_CASE("gauge properties: homogeneity, evenness, positivity, triangle") {
    gaugelab::num::RngStream rng(424242, 0);
    for (const auto& body : body_zoo()) {
        const int n = body.dimension();
        for (int trial = 0; trial < 60; ++trial) {
            auto x = random_point(n, rng);
            const double s = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
            const double g = body.gauge(x);

            auto sx = x;
            for (auto& v : sx) v *= s;
            CHECK(body.gauge(sx) == doctest::Approx(s * g).epsilon(1e-10));

            auto nx = x;
            for (auto& v : nx) v = -v;
            if (body.kind() == gaugelab::BodyKind::synth2d)
                CHECK(body.gauge(nx) == doctest::Approx(g).epsilon(1e-12));
            else
                CHECK(body.gauge(nx) == g); // |.| based evaluation is exactly even

            if (g > 0.0) CHECK(g > 0.0);

            if (body.convex()) {
                const auto y = random_point(n, rng);
                auto xy = x;
                for (int i = 0; i < n; ++i) xy[i] += y[i];
                CHECK(body.gauge(xy) <= body.gauge(x) + body.gauge(y) + 1e-10);
            }
        }
        CHECK(body.gauge(std::vector<double>(n, 0.0)) == 0.0);
    }
}

TEST_CASE("gauge input validation") {
    const auto b = StarBody::lq(3, 2.0);
    CHECK_THROWS_AS(b.gauge({1.0, 2.0}), ArgumentError);
    CHECK_THROWS_AS(b.gauge({1.0, 2.0, std::numeric_limits<double>::quiet_NaN()}), ArgumentError);
    CHECK_THROWS_AS(StarBody::lq(0, 2.0), ArgumentError);
    CHECK_THROWS_AS(StarBody::lq(2, 0.0), ArgumentError);
    CHECK_THROWS_AS(StarBody::lq(2, -1.0), ArgumentError);
}

TEST_CASE("synthetic 2-d gauge closed forms") {
    // Two atoms at 0 and pi/2 with weight 1/2: gauge(r u(t)) = r sqrt(|sin 2t| / 2).
    const auto b = StarBody::synth2d({0.0, std::numbers::pi / 2}, {0.5, 0.5}, 0.0);
    CHECK(b.gauge({1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    const double t = std::numbers::pi / 8;
    CHECK(b.gauge({std::cos(t), std::sin(t)}) ==
          doctest::Approx(0.5946035575013605).epsilon(1e-12));
    // Single atom: gauge(x) = |x . u(angle)| e^C with unit weight.
    const auto a = StarBody::synth2d({0.0}, {1.0}, 0.25);
    CHECK(a.gauge({2.0, 0.0}) == doctest::Approx(2.0 * std::exp(0.25)).epsilon(1e-12));
    CHECK(a.gauge({3.0, 4.0}) == doctest::Approx(3.0 * std::exp(0.25)).epsilon(1e-12));
    CHECK_THROWS_AS(StarBody::synth2d({0.0}, {-0.1}, 0.0), ArgumentError);
}

TEST_CASE("image bodies are ellipsoidal gauges") {
    const std::vector<double> t = {2.0, 1.0, 0.0, 1.0};
    const auto b = StarBody::image(2, t);
    // gauge(x) = |T^-1 x|_2 with T^-1 = [[0.5, -0.5], [0, 1]].
    CHECK(b.gauge({2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.gauge({1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12)); // T e2
    CHECK(b.gauge({3.0, 1.0}) == doctest::Approx(std::hypot(1.0, 1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(StarBody::image(2, {1.0, 2.0, 2.0, 4.0}), ArgumentError); // singular
    CHECK_THROWS_AS(StarBody::image(2, {1.0, 2.0, 3.0}), ArgumentError);
}

TEST_CASE("second derivative scan matches calculus oracles") {
    const auto l2 = StarBody::lq(4, 2.0);
    const std::vector<double> e2 = {1.0, 0.0, 0.0};
    double err = 0.0;
    // d2/dx1^2 sqrt(x1^2 + b^2) at 0 = 1/b.
    CHECK(gaugelab::second_derivative_x1(l2, 0.0, e2, 1e-2, &err) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(err < 1e-6);
    CHECK(gaugelab::second_derivative_x1(l2, 0.0, {2.0, 0.0, 0.0}, 1e-2) ==
          doctest::Approx(0.5).epsilon(1e-8));

    // For q > 2 the second derivative at the hyperplane vanishes.
    CHECK(std::fabs(gaugelab::second_derivative_x1(StarBody::lq(4, 4.0), 0.0, e2, 1e-2)) < 1e-6);
    // q = 3 has |x1|^3 structure; the order-fitted extrapolation must still
    // land near 0.
    CHECK(std::fabs(gaugelab::second_derivative_x1(StarBody::lq(4, 3.0), 0.0, e2, 1e-2)) < 1e-5);

    // Ellipsoid oracle: gauge g(x) = |Ax|_2, d2g/dx1^2 = (m11 - ((M x)_1/g)^2)/g
    // with M = A^T A.
    const std::vector<double> tm = {2.0, 1.0, 0.0, 1.0};
    const auto img = StarBody::image(2, tm);
    const std::vector<double> a = {0.5, -0.5, 0.0, 1.0}; // T^-1
    auto at = [&](double x0, double x1, int i) { return a[i * 2] * x0 + a[i * 2 + 1] * x1; };
    const double px = 0.7, py = 1.3;
    const double g = std::hypot(at(px, py, 0), at(px, py, 1));
    const double m11 = a[0] * a[0] + a[2] * a[2];
    const double mx1 = a[0] * at(px, py, 0) + a[2] * at(px, py, 1);
    const double want = (m11 - (mx1 / g) * (mx1 / g)) / g;
    CHECK(gaugelab::second_derivative_x1(img, px, {py}, 1e-2) ==
          doctest::Approx(want).epsilon(1e-7));

    CHECK_THROWS_AS(gaugelab::second_derivative_x1(StarBody::lq(4, 1.0), 0.0, e2, 1e-2),
                    UnsupportedOperation);
    CHECK_THROWS_AS(
        gaugelab::second_derivative_x1(StarBody::lq(4, std::numeric_limits<double>::infinity()),
                                       0.0, e2, 1e-2),
        UnsupportedOperation);
    CHECK_THROWS_AS(gaugelab::second_derivative_x1(l2, 0.0, e2, 0.0), ArgumentError);
    CHECK_THROWS_AS(gaugelab::second_derivative_x1(l2, 0.0, {1.0, 0.0}, 1e-2), ArgumentError);
}

TEST_CASE("derivative-condition scan separates the catalog examples") {
    gaugelab::Prop3ScanSpec spec;
    spec.directions = 32;

    const auto rep4 = gaugelab::prop3_conditions_scan(StarBody::lq(4, 4.0), spec);
    CHECK(rep4.cond1_max_violation < 1e-6);
    REQUIRE(!rep4.cond3_profile.empty());
    CHECK(rep4.cond3_profile.front().first > rep4.cond3_profile.back().first);
    CHECK(rep4.cond3_profile.back().second < 1e-4);  // profile decays toward 0
    CHECK(rep4.cond3_profile.front().second > 0.05); // but is not trivially 0
    CHECK(rep4.cond2_c > 0.0);

    const auto rep2 = gaugelab::prop3_conditions_scan(StarBody::lq(4, 2.0), spec);
    CHECK(rep2.cond1_max_violation == doctest::Approx(1.0).epsilon(1e-2));

    const auto repq = gaugelab::prop3_conditions_scan(
        StarBody::qsum(StarBody::lq(3, 2.0), StarBody::lq(1, 2.0), 3.0), spec);
    CHECK(repq.cond1_max_violation < 1e-5);
    // Exact profile for this q-sum is 2*x1*(1 + x1^3)^(-5/3): linear decay.
    CHECK(repq.cond3_profile.back().second ==
          doctest::Approx(2e-3).epsilon(1e-2));
    CHECK(repq.cond3_profile.back().second < 1e-2 * repq.cond3_profile.front().second);

    CHECK_THROWS_AS(gaugelab::prop3_conditions_scan(StarBody::lq(3, 4.0), spec), ArgumentError);
    CHECK_THROWS_AS(
        gaugelab::prop3_conditions_scan(StarBody::lq(4, std::numeric_limits<double>::infinity()), spec),
        UnsupportedOperation);
}

TEST_CASE("body spec strings round-trip canonically") {
    for (const char* s :
         {"lq:n=3,q=4", "lq:n=2,q=inf", "lq:n=4,q=0.5", "orlicz:n=3,M=poly(4)",
          "qsum:left=lq:n=3,q=2,right=lq:n=1,q=2,q=3",
          "qsum:left=qsum:left=lq:n=2,q=2,right=lq:n=1,q=2,q=2,right=lq:n=1,q=4,q=3",
          "image:T=2,1,0,1"}) {
        CAPTURE(s);
        const auto body = StarBody::parse(s);
        CHECK(body.spec_string() == s);
        // Parse of the canonical form is stable too.
        CHECK(StarBody::parse(body.spec_string()).spec_string() == body.spec_string());
    }
    // Non-canonical floats normalize.
    CHECK(StarBody::parse("lq:n=3,q=4.0").spec_string() == "lq:n=3,q=4");
    CHECK(StarBody::parse("lq:n=3,q=0.50").spec_string() == "lq:n=3,q=0.5");

    const auto nested = StarBody::parse(
        "qsum:left=qsum:left=lq:n=2,q=2,right=lq:n=1,q=2,q=2,right=lq:n=1,q=4,q=3");
    CHECK(nested.dimension() == 4);

    for (const char* bad :
         {"lq:n=3", "lq:q=2,n=3", "wat:n=1", "nocolon", "orlicz:n=2,M=exp(2)",
          "qsum:left=lq:n=2,q=2,q=3", "image:T=1,2,3",
          "qsum:left=lq:n=1,q=2,right=qsum:left=lq:n=1,q=2,right=lq:n=1,q=2,q=2,q=2"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(StarBody::parse(bad), ArgumentError);
    }
}

TEST_CASE("synth2d file specs load and round-trip") {
    const std::string path = "synth_roundtrip_tmp.csv";
    {
        std::ofstream out(path);
        out << "angle,weight\n";
        out << "0,0.5\n";
        out << "1.5707963267948966,0.5\n";
        out << "# C=0.25\n";
    }
    const auto body = StarBody::parse("synth2d:file=" + path);
    CHECK(body.dimension() == 2);
    CHECK(body.synth_constant() == doctest::Approx(0.25));
    REQUIRE(body.synth_weights().size() == 2);
    CHECK(body.synth_weights()[0] == doctest::Approx(0.5));
    CHECK(body.spec_string() == "synth2d:file=" + path);

    {
        std::ofstream out("synth_bad_tmp.csv");
        out << "0,0.5\n"; // no C line
    }
    CHECK_THROWS_AS(StarBody::parse("synth2d:file=synth_bad_tmp.csv"), ArgumentError);
    CHECK_THROWS_AS(StarBody::parse("synth2d:file=/does/not/exist.csv"), ArgumentError);
    std::remove(path.c_str());
    std::remove("synth_bad_tmp.csv");
}
