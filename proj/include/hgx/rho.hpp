#pragma once

#include "hgx/types.hpp"

#include <utility>
#include <vector>

namespace hgx {

enum class RhoKind {
    power,         // x^sigma
    log,           // ln(x)
    exp,           // e^x
    neg_exp,       // e^{-x}
    sigmoid,       // 1/(1+e^{-x})
    gaussian_pdf,  // exp(-x^2/2)/sqrt(2*pi)
    custom_table,  // exact-key lookup, no interpolation
};

/// Degree-shaping function applied to hyperedge degrees. Must evaluate to a
/// finite, strictly positive value on every degree that occurs.
struct RhoSpec {
    RhoKind kind = RhoKind::power;
    double sigma = -1.0;  // exponent, used by kind == power only
    std::vector<std::pair<double, double>> table;  // custom_table entries

    static RhoSpec power(double s) { return RhoSpec{RhoKind::power, s, {}}; }
    static RhoSpec of(RhoKind k) { return RhoSpec{k, 0.0, {}}; }
};

bool operator==(const RhoSpec& a, const RhoSpec& b);
inline bool operator!=(const RhoSpec& a, const RhoSpec& b) { return !(a == b); }

const char* rho_kind_name(RhoKind kind);
RhoKind rho_kind_from_name(const std::string& name);

/// Evaluate rho at x. Throws ValidationError if x <= 0, if the result is not
/// finite and strictly positive, or if a custom table has no exact key x.
double rho_eval(const RhoSpec& rho, double x);

/// Evaluate rho on every entry of a degree vector, memoizing per distinct
/// degree value.
Vector rho_eval(const RhoSpec& rho, const Vector& degrees);

}  // namespace hgx
