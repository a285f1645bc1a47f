#include <cstdio>
#include <string>

#include "khl/grid.hpp"
#include "khl/kernels.hpp"
#include "khl/quadrature.hpp"

namespace khl {

namespace {
std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

std::string to_string(const QuadratureRule& rule) {
    if (rule.kind == QuadratureRule::Kind::midpoint) return "midpoint";
    return "gauss-legendre(" + std::to_string(rule.panels) + "x" + std::to_string(rule.order) + ")";
}

std::string to_string(const KernelSpec& spec) {
    switch (spec.kind()) {
        case KernelKind::A0:
            return "A0";
        case KernelKind::A1:
            return "A1";
        case KernelKind::Kmu:
            return "Kmu(" + number(spec.mu()) + ")";
    }
    return "?";
}

std::string to_string(const TestFunction& f) {
    if (f.kind() == TestFunction::Kind::gaussian)
        return "gaussian(" + number(f.first()) + "," + number(f.second()) + ")";
    return "indicator(" + number(f.first()) + "," + number(f.second()) + ")";
}

}  // namespace khl
