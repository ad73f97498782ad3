#include "hgx/rho.hpp"

#include <cmath>
#include <map>

namespace hgx {

bool operator==(const RhoSpec& a, const RhoSpec& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == RhoKind::power && a.sigma != b.sigma) return false;
    if (a.kind == RhoKind::custom_table && a.table != b.table) return false;
    return true;
}

const char* rho_kind_name(RhoKind kind) {
    switch (kind) {
        case RhoKind::power: return "power";
        case RhoKind::log: return "log";
        case RhoKind::exp: return "exp";
        case RhoKind::neg_exp: return "neg_exp";
        case RhoKind::sigmoid: return "sigmoid";
        case RhoKind::gaussian_pdf: return "gaussian_pdf";
        case RhoKind::custom_table: return "custom_table";
    }
    return "power";
}

RhoKind rho_kind_from_name(const std::string& name) {
    if (name == "power") return RhoKind::power;
    if (name == "log") return RhoKind::log;
    if (name == "exp") return RhoKind::exp;
    if (name == "neg_exp") return RhoKind::neg_exp;
    if (name == "sigmoid") return RhoKind::sigmoid;
    if (name == "gaussian_pdf") return RhoKind::gaussian_pdf;
    if (name == "custom_table") return RhoKind::custom_table;
    throw ValidationError("unknown rho kind: " + name);
}

double rho_eval(const RhoSpec& rho, double x) {
    if (!(x > 0.0)) {
        throw ValidationError("rho evaluated at nonpositive degree " + std::to_string(x));
    }
    double value = 0.0;
    switch (rho.kind) {
        case RhoKind::power: value = std::pow(x, rho.sigma); break;
        case RhoKind::log: value = std::log(x); break;
        case RhoKind::exp: value = std::exp(x); break;
        case RhoKind::neg_exp: value = std::exp(-x); break;
        case RhoKind::sigmoid: value = 1.0 / (1.0 + std::exp(-x)); break;
        case RhoKind::gaussian_pdf:
            value = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
            break;
        case RhoKind::custom_table: {
            bool found = false;
            for (const auto& [key, val] : rho.table) {
                if (key == x) {  // exact key match, interpolation is refused
                    value = val;
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw ValidationError("rho custom table has no entry for degree " +
                                      std::to_string(x));
            }
            break;
        }
    }
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw ValidationError("rho(" + std::to_string(x) + ") = " + std::to_string(value) +
                              " is not finite and strictly positive");
    }
    return value;
}

Vector rho_eval(const RhoSpec& rho, const Vector& degrees) {
    std::map<double, double> memo;
    Vector out(degrees.size());
    for (Index i = 0; i < degrees.size(); ++i) {
        auto it = memo.find(degrees[i]);
        if (it == memo.end()) {
            it = memo.emplace(degrees[i], rho_eval(rho, degrees[i])).first;
        }
        out[i] = it->second;
    }
    return out;
}

}  // namespace hgx
