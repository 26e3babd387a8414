#include "iab/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace iab::quad {

namespace {

// Nodes and weights on [-1, 1], cached per order.
const Rule& reference_rule(int n) {
    static std::mutex mutex;
    static std::map<int, Rule> cache;

    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
        table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)),
              &gsl_integration_glfixed_table_free);
    if (!table) throw std::runtime_error("gauss_legendre: table allocation failed");

    Rule rule(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = 0.0;
        double w = 0.0;
        gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &x, &w, table.get());
        rule[static_cast<std::size_t>(i)] = {x, w};
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace

Rule gauss_legendre(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    Rule rule;
    rule.reserve(static_cast<std::size_t>(n));
    for (const Node& node : reference_rule(n)) rule.push_back({mid + half * node.x, half * node.w});
    return rule;
}

Rule gauss_legendre_cosine(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_cosine: need at least one node");
    const double len = b - a;
    Rule rule;
    rule.reserve(static_cast<std::size_t>(n));
    for (const Node& node : reference_rule(n)) {
        const double s = 0.5 * (node.x + 1.0);
        const double x = a + 0.5 * len * (1.0 - std::cos(std::numbers::pi * s));
        const double jac = 0.5 * len * std::numbers::pi * std::sin(std::numbers::pi * s);
        rule.push_back({x, 0.5 * node.w * jac});
    }
    return rule;
}

Rule piecewise(double a, double b, std::initializer_list<double> breaks, int n) {
    std::vector<double> cuts{a};
    for (double c : breaks) {
        if (c > a && c < b) cuts.push_back(c);
    }
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(b);

    Rule rule;
    rule.reserve(cuts.size() * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        // Drop slivers that would only add rounding noise.
        if (cuts[i + 1] - cuts[i] <= 1e-12 * std::max(1.0, std::abs(b - a))) continue;
        Rule piece = gauss_legendre_cosine(cuts[i], cuts[i + 1], n);
        rule.insert(rule.end(), piece.begin(), piece.end());
    }
    return rule;
}

double sum_weights(const Rule& rule) {
    double s = 0.0;
    for (const Node& node : rule) s += node.w;
    return s;
}

}  // namespace iab::quad
