#pragma once

#include <initializer_list>
#include <vector>

namespace iab::quad {

struct Node {
    double x;
    double w;
};

using Rule = std::vector<Node>;

// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(double a, double b, int n);

// Gauss-Legendre after the substitution x = a + (b - a)(1 - cos(pi s)) / 2.
// Integrands with square-root behaviour at either end (the arccos terms of
// the association boundary) become smooth in s.
Rule gauss_legendre_cosine(double a, double b, int n);

// Cosine-mapped rule on every piece of [a, b] cut at the given breakpoints.
// Breakpoints outside (a, b) are ignored.
Rule piecewise(double a, double b, std::initializer_list<double> breaks, int n);

double sum_weights(const Rule& rule);

}  // namespace iab::quad
