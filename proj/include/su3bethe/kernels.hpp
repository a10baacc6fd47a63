#ifndef SU3BETHE_KERNELS_HPP
#define SU3BETHE_KERNELS_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "su3bethe/scalar.hpp"

namespace su3bethe {

// The four rational kernels of the SU(3)-invariant R-matrix:
//   g(x,y) = c/(x-y)
//   f(x,y) = (x-y+c)/(x-y) = 1 + g(x,y)
//   h(x,y) = f/g = (x-y+c)/c            (no pole)
//   t(x,y) = g/h = c^2/((x-y)(x-y+c))
// Barred sets are ordered vectors; products over sets follow the shorthand
// convention: a set argument means the product over its elements, an empty
// set gives 1.

template <Scalar S>
using VarSet = std::vector<S>;

enum class Kernel { G, F, H, T };

inline const char* kernel_name(Kernel k) {
    switch (k) {
        case Kernel::G: return "g";
        case Kernel::F: return "f";
        case Kernel::H: return "h";
        case Kernel::T: return "t";
    }
    return "?";
}

namespace kernel {

template <Scalar S>
S g(const S& x, const S& y, const S& c) {
    S d = x - y;
    if (is_zero(d)) throw PoleError("g(x,y) pole at x=y");
    return c / d;
}

template <Scalar S>
S f(const S& x, const S& y, const S& c) {
    S d = x - y;
    if (is_zero(d)) throw PoleError("f(x,y) pole at x=y");
    return (d + c) / d;
}

template <Scalar S>
S h(const S& x, const S& y, const S& c) {
    return (x - y + c) / c;
}

template <Scalar S>
S t(const S& x, const S& y, const S& c) {
    S d = x - y;
    if (is_zero(d)) throw PoleError("t(x,y) pole at x=y");
    S dc = d + c;
    if (is_zero(dc)) throw PoleError("t(x,y) pole at x-y=-c");
    return (c * c) / (d * dc);
}

} // namespace kernel

template <Scalar S>
S eval_kernel(Kernel k, const S& x, const S& y, const S& c) {
    switch (k) {
        case Kernel::G: return kernel::g(x, y, c);
        case Kernel::F: return kernel::f(x, y, c);
        case Kernel::H: return kernel::h(x, y, c);
        case Kernel::T: return kernel::t(x, y, c);
    }
    throw Error("bad kernel tag");
}

/// prod_{a in A} prod_{b in B} k(a, b); empty set on either side gives 1.
template <Scalar S>
S set_product(Kernel k, const VarSet<S>& A, const VarSet<S>& B, const S& c) {
    S acc = scalar_traits<S>::one();
    for (const auto& a : A)
        for (const auto& b : B) acc = acc * eval_kernel(k, a, b, c);
    return acc;
}

// One-sided product shorthands, k(x, B) and k(A, y).

template <Scalar S>
S kprod(Kernel k, const S& x, const VarSet<S>& B, const S& c) {
    S acc = scalar_traits<S>::one();
    for (const auto& b : B) acc = acc * eval_kernel(k, x, b, c);
    return acc;
}

template <Scalar S>
S kprod(Kernel k, const VarSet<S>& A, const S& y, const S& c) {
    S acc = scalar_traits<S>::one();
    for (const auto& a : A) acc = acc * eval_kernel(k, a, y, c);
    return acc;
}

// Set utilities used by every partition formula.

template <Scalar S>
VarSet<S> shifted(const VarSet<S>& xs, const S& delta) {
    VarSet<S> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(x + delta);
    return out;
}

template <Scalar S>
VarSet<S> unite(const VarSet<S>& a, const VarSet<S>& b) {
    VarSet<S> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

template <Scalar S>
VarSet<S> unite(const VarSet<S>& a, const VarSet<S>& b, const VarSet<S>& c) {
    return unite(unite(a, b), c);
}

template <Scalar S>
VarSet<S> unite(const VarSet<S>& a, const VarSet<S>& b, const VarSet<S>& c, const VarSet<S>& d) {
    return unite(unite(a, b), unite(c, d));
}

template <Scalar S>
VarSet<S> erased(const VarSet<S>& xs, std::size_t i) {
    VarSet<S> out;
    out.reserve(xs.size() - 1);
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (j != i) out.push_back(xs[j]);
    return out;
}

template <Scalar S>
VarSet<S> select(const VarSet<S>& xs, const std::vector<int>& idx) {
    VarSet<S> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(xs[static_cast<std::size_t>(i)]);
    return out;
}

template <Scalar S>
bool contains(const VarSet<S>& xs, const S& x) {
    for (const auto& e : xs)
        if (is_zero(e - x)) return true;
    return false;
}

} // namespace su3bethe

#endif
