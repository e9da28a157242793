#include "gaugelab/normfunction.hpp"

#include <cmath>

#include "gaugelab/bessel.hpp"
#include "gaugelab/errors.hpp"
#include "gaugelab/format.hpp"

namespace gaugelab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string field(const std::string& kv, const std::string& key, const char* production) {
    if (kv.rfind(key + "=", 0) != 0)
        throw ArgumentError(std::string("norm function tag: expected ") + key +
                            "=... in production " + production);
    return kv.substr(key.size() + 1);
}

} // namespace

double omega(int n, double r) {
    if (n < 2 || n > 22) throw ArgumentError("omega: dimension must be in [2, 22]");
    r = std::fabs(r);
    if (r < 0.5) {
        // Sum_k (-r^2/4)^k / (k! (n/2)_k); converges to full precision in a
        // handful of terms on this range.
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < 30; ++k) {
            term *= -(r * r / 4.0) / ((k + 1.0) * (k + n / 2.0));
            sum += term;
            if (std::fabs(term) < 1e-18) break;
        }
        return sum;
    }
    const double nu = (n - 2) / 2.0;
    return std::pow(2.0, nu) * std::tgamma(n / 2.0) * num::bessel_j(nu, r) / std::pow(r, nu);
}

double schoenberg_mixture(int n, const std::vector<MixtureAtom>& atoms, double t) {
    if (atoms.empty()) throw ArgumentError("mixture: needs at least one atom");
    double wsum = 0.0;
    for (const auto& a : atoms) {
        if (a.weight < 0.0) throw ArgumentError("mixture: negative weight");
        if (a.radius < 0.0) throw ArgumentError("mixture: negative radius");
        wsum += a.weight;
    }
    if (std::fabs(wsum - 1.0) > 1e-9) throw ArgumentError("mixture: weights must sum to 1");
    double sum = 0.0;
    for (const auto& a : atoms) sum += a.weight * omega(n, t * a.radius);
    return sum;
}

NormFunction NormFunction::exp_pow(double p) {
    if (!(p > 0.0) || p > 2.0) throw ArgumentError("exp_pow: exponent must lie in (0, 2]");
    return NormFunction([p](double t) { return std::exp(-std::pow(t, p)); },
                        "exp_pow:p=" + format_double(p));
}

NormFunction NormFunction::omega_kernel(int n) {
    if (n < 2 || n > 22) throw ArgumentError("omega: dimension must be in [2, 22]");
    return NormFunction([n](double t) { return omega(n, t); }, "omega:n=" + std::to_string(n));
}

NormFunction NormFunction::mixture(int n, std::vector<MixtureAtom> atoms) {
    schoenberg_mixture(n, atoms, 0.0); // validates n and the atom list
    std::string tag = "mixture:n=" + std::to_string(n) + ",atoms=";
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (k) tag += ';';
        tag += format_double(atoms[k].radius) + ":" + format_double(atoms[k].weight);
    }
    return NormFunction(
        [n, atoms = std::move(atoms)](double t) { return schoenberg_mixture(n, atoms, t); },
        std::move(tag));
}

NormFunction NormFunction::constant() {
    return NormFunction([](double) { return 1.0; }, "constant");
}

NormFunction NormFunction::parse(const std::string& tag) {
    if (tag == "constant") return constant();
    const auto colon = tag.find(':');
    if (colon == std::string::npos)
        throw ArgumentError("norm function tag: expected kind:params in production "
                            "exp_pow:p=<float> | omega:n=<int> | mixture:n=<int>,atoms=<r>:<w>;... "
                            "| constant");
    const std::string kind = tag.substr(0, colon);
    const std::string rest = tag.substr(colon + 1);
    if (kind == "exp_pow") return exp_pow(parse_double(field(rest, "p", "exp_pow:p=<float>")));
    if (kind == "omega") return omega_kernel(parse_int(field(rest, "n", "omega:n=<int>")));
    if (kind == "mixture") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw ArgumentError(
                "norm function tag: expected n=<int>,atoms=... in production "
                "mixture:n=<int>,atoms=<r>:<w>;...");
        const int n = parse_int(field(rest.substr(0, comma), "n", "mixture:n=<int>,atoms=..."));
        const std::string spec =
            field(rest.substr(comma + 1), "atoms", "mixture:n=<int>,atoms=<r>:<w>;...");
        std::vector<MixtureAtom> atoms;
        for (const auto& part : split(spec, ';')) {
            const auto sep = part.find(':');
            if (sep == std::string::npos)
                throw ArgumentError("norm function tag: atom must be <r>:<w> in production "
                                    "mixture:n=<int>,atoms=<r>:<w>;...");
            atoms.push_back(
                {parse_double(part.substr(0, sep)), parse_double(part.substr(sep + 1))});
        }
        return mixture(n, std::move(atoms));
    }
    throw ArgumentError("norm function tag: unknown kind '" + kind +
                        "' in production exp_pow | omega | mixture | constant");
}

} // namespace gaugelab
