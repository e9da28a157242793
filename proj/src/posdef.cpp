#include "gaugelab/posdef.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <json.hpp>

#include "gaugelab/errors.hpp"
#include "gaugelab/rng.hpp"
#include "gaugelab/symeig.hpp"

namespace gaugelab {

namespace {

// Flat point storage (m x n row-major) used by the search loops.
void fill_gram(const NormFunction& f, const StarBody& body, const double* pts, int m,
               std::vector<double>& gram, std::vector<double>& diff) {
    const int n = body.dimension();
    const double f0 = f(0.0);
    gram.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        gram[i * static_cast<std::size_t>(m) + i] = f0;
        for (int j = i + 1; j < m; ++j) {
            for (int k = 0; k < n; ++k) diff[k] = pts[i * n + k] - pts[j * n + k];
            const double v = f(body.gauge(diff.data()));
            gram[i * static_cast<std::size_t>(m) + j] = v;
            gram[j * static_cast<std::size_t>(m) + i] = v;
        }
    }
}

double min_eig_of(const NormFunction& f, const StarBody& body, const double* pts, int m,
                  std::vector<double>& gram, std::vector<double>& diff) {
    fill_gram(f, body, pts, m, gram, diff);
    return num::sym_eigenvalues(gram, m).front();
}

// Distinct integer lattice points with coordinates in {-L..L}; L grows with m
// so the draw cannot stall.
void draw_lattice(num::RngStream& rng, int m, int n, double scale, std::vector<double>& pts) {
    int L = 2;
    while (std::pow(2.0 * L + 1.0, n) < 4.0 * m) ++L;
    pts.resize(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        while (true) {
            for (int k = 0; k < n; ++k)
                pts[i * n + k] = static_cast<double>(
                    static_cast<long long>(rng.uniform(0.0, 2.0 * L + 1.0)) - L);
            bool fresh = true;
            for (int j = 0; j < i && fresh; ++j) {
                bool same = true;
                for (int k = 0; k < n && same; ++k) same = pts[i * n + k] == pts[j * n + k];
                fresh = !same;
            }
            if (fresh) break;
        }
    }
    for (auto& v : pts) v *= scale;
}

void draw_gaussian(num::RngStream& rng, int m, int n, double scale, std::vector<double>& pts) {
    pts.resize(static_cast<std::size_t>(m) * n);
    for (auto& v : pts) v = scale * rng.normal();
}

struct Candidate {
    double score = 0.0;
    double scale = 0.0;
    std::uint64_t trial = 0;
    std::vector<double> pts;
};

} // namespace

std::vector<double> gram_matrix(const NormFunction& f, const StarBody& body,
                                const std::vector<std::vector<double>>& points) {
    const int m = static_cast<int>(points.size());
    if (m < 1) throw ArgumentError("gram_matrix: need at least one point");
    const int n = body.dimension();
    std::vector<double> flat(static_cast<std::size_t>(m) * n);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(points[i].size()) != n)
            throw ArgumentError("gram_matrix: point dimension does not match the body");
        std::copy(points[i].begin(), points[i].end(), flat.begin() + i * static_cast<std::size_t>(n));
    }
    std::vector<double> gram, diff(n);
    fill_gram(f, body, flat.data(), m, gram, diff);
    return gram;
}

double min_gram_eigenvalue(const NormFunction& f, const StarBody& body,
                           const std::vector<std::vector<double>>& points) {
    return num::sym_eigenvalues(gram_matrix(f, body, points),
                                static_cast<int>(points.size()))
        .front();
}

std::optional<GramWitness> refute_positive_definiteness(const NormFunction& f,
                                                        const StarBody& body, int m,
                                                        long long budget, std::uint64_t seed,
                                                        double tol) {
    if (m < 2) throw ArgumentError("refute: need at least 2 points per configuration");
    if (budget < 1) throw ArgumentError("refute: budget must be positive");
    if (tol < 0.0) throw ArgumentError("refute: tolerance must be nonnegative");
    const int n = body.dimension();

    // Length scales in gauge units: the sampled upper Euclidean constant maps
    // unit gauge distance to Euclidean size ~1/d.
    const double d = body.euclid_bounds(std::max(100, 64 * n)).second;
    const double base = 1.0 / d;

    const long long n_random = std::max<long long>(1, budget / 2);
    std::vector<Candidate> best; // ascending by score, at most 5
    std::vector<double> pts, gram, diff(n);
    for (long long t = 0; t < n_random; ++t) {
        num::RngStream rng(seed, static_cast<std::uint64_t>(t));
        const double scale = base * std::ldexp(1.0, static_cast<int>((t / 2) % 8) - 4);
        if (t % 2 == 0)
            draw_lattice(rng, m, n, scale, pts);
        else
            draw_gaussian(rng, m, n, scale, pts);
        const double score = min_eig_of(f, body, pts.data(), m, gram, diff);
        if (best.size() < 5 || score < best.back().score) {
            Candidate c{score, scale, static_cast<std::uint64_t>(t), pts};
            best.insert(std::upper_bound(best.begin(), best.end(), c,
                                         [](const Candidate& a, const Candidate& b) {
                                             return a.score < b.score;
                                         }),
                        std::move(c));
            if (best.size() > 5) best.pop_back();
        }
    }

    // Refinement: step-halving coordinate descent on the smallest eigenvalue.
    const long long refine_total = budget - n_random;
    const long long per_candidate = best.empty() ? 0 : refine_total / static_cast<long long>(best.size());
    for (auto& cand : best) {
        long long evals = per_candidate;
        double step = cand.scale / 4.0;
        while (evals > 0 && step > 1e-7 * cand.scale) {
            bool improved = false;
            for (int i = 0; i < m && evals > 0; ++i) {
                for (int k = 0; k < n && evals > 0; ++k) {
                    for (double sgn : {1.0, -1.0}) {
                        if (evals <= 0) break;
                        const double saved = cand.pts[i * n + k];
                        cand.pts[i * n + k] = saved + sgn * step;
                        const double s = min_eig_of(f, body, cand.pts.data(), m, gram, diff);
                        --evals;
                        if (s < cand.score) {
                            cand.score = s;
                            improved = true;
                            break;
                        }
                        cand.pts[i * n + k] = saved;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
    }

    const auto it = std::min_element(
        best.begin(), best.end(),
        [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
    if (it == best.end() || it->score >= -tol) return std::nullopt;

    fill_gram(f, body, it->pts.data(), m, gram, diff);
    const auto eig = num::sym_eigen_min(gram, m);
    GramWitness w;
    w.points.resize(m);
    for (int i = 0; i < m; ++i)
        w.points[i].assign(it->pts.begin() + i * static_cast<std::size_t>(n),
                           it->pts.begin() + (i + 1) * static_cast<std::size_t>(n));
    w.coefficients = eig.vector;
    w.min_eigenvalue = eig.value;
    // Store the form as actually recomputed so the witness self-verifies
    // bit-for-bit.
    double form = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            form += w.coefficients[i] * gram[i * static_cast<std::size_t>(m) + j] *
                    w.coefficients[j];
    w.quadratic_form_value = form;
    w.f_tag = f.tag();
    w.body_spec = body.spec_string();
    w.seed = seed;
    w.trial = it->trial;
    if (!(w.quadratic_form_value < -tol)) return std::nullopt; // eig/form round-off disagree
    return w;
}

double recompute_quadratic_form(const GramWitness& w) {
    const auto f = NormFunction::parse(w.f_tag);
    const auto body = StarBody::parse(w.body_spec);
    const auto gram = gram_matrix(f, body, w.points);
    const int m = static_cast<int>(w.points.size());
    if (static_cast<int>(w.coefficients.size()) != m)
        throw ArgumentError("witness: coefficient count does not match points");
    double form = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            form += w.coefficients[i] * gram[i * static_cast<std::size_t>(m) + j] *
                    w.coefficients[j];
    return form;
}

std::string witness_to_json(const GramWitness& w) {
    nlohmann::ordered_json j;
    j["points"] = w.points;
    j["coefficients"] = w.coefficients;
    j["value"] = w.quadratic_form_value;
    j["min_eigenvalue"] = w.min_eigenvalue;
    j["f"] = w.f_tag;
    j["body"] = w.body_spec;
    j["seed"] = w.seed;
    j["trial"] = w.trial;
    return j.dump(2) + "\n";
}

GramWitness witness_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("witness: unparseable JSON: ") + e.what());
    }
    GramWitness w;
    try {
        w.points = j.at("points").get<std::vector<std::vector<double>>>();
        w.coefficients = j.at("coefficients").get<std::vector<double>>();
        w.quadratic_form_value = j.at("value").get<double>();
        w.min_eigenvalue = j.at("min_eigenvalue").get<double>();
        w.f_tag = j.at("f").get<std::string>();
        w.body_spec = j.at("body").get<std::string>();
        w.seed = j.at("seed").get<std::uint64_t>();
        w.trial = j.at("trial").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("witness: missing or mistyped field: ") + e.what());
    }
    return w;
}

} // namespace gaugelab
