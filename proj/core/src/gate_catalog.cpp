#include "qfl/gate_catalog.hpp"

#include "qfl/errors.hpp"

#include <cmath>
#include <numbers>

namespace qfl {

namespace {

GateMatrix from_rows(int dim, std::initializer_list<cplx> entries) {
    GateMatrix m;
    m.dim = dim;
    m.data.assign(entries);
    return m;
}

constexpr cplx I{0.0, 1.0};

GateMatrix build_id(std::span<const double>) {
    return from_rows(2, {1, 0, 0, 1});
}
GateMatrix build_x(std::span<const double>) {
    return from_rows(2, {0, 1, 1, 0});
}
GateMatrix build_y(std::span<const double>) {
    return from_rows(2, {0, -I, I, 0});
}
GateMatrix build_z(std::span<const double>) {
    return from_rows(2, {1, 0, 0, -1});
}
GateMatrix build_h(std::span<const double>) {
    const double s = 1.0 / std::numbers::sqrt2;
    return from_rows(2, {s, s, s, -s});
}
GateMatrix build_s(std::span<const double>) {
    return from_rows(2, {1, 0, 0, I});
}
GateMatrix build_sdg(std::span<const double>) {
    return from_rows(2, {1, 0, 0, -I});
}
GateMatrix build_t(std::span<const double>) {
    return from_rows(2, {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)});
}
GateMatrix build_tdg(std::span<const double>) {
    return from_rows(2, {1, 0, 0, std::polar(1.0, -std::numbers::pi / 4)});
}
GateMatrix build_rx(std::span<const double> p) {
    const double c = std::cos(p[0] / 2), s = std::sin(p[0] / 2);
    return from_rows(2, {c, -I * s, -I * s, c});
}
GateMatrix build_ry(std::span<const double> p) {
    const double c = std::cos(p[0] / 2), s = std::sin(p[0] / 2);
    return from_rows(2, {c, -s, s, c});
}
GateMatrix build_rz(std::span<const double> p) {
    return from_rows(2, {std::polar(1.0, -p[0] / 2), 0, 0, std::polar(1.0, p[0] / 2)});
}
GateMatrix build_p(std::span<const double> p) {
    return from_rows(2, {1, 0, 0, std::polar(1.0, p[0])});
}

// Two-qubit matrices: operand 0 is sub-index bit 0. cx/cz control on
// operand 0, target operand 1.
GateMatrix build_cx(std::span<const double>) {
    return from_rows(4, {1, 0, 0, 0,
                         0, 0, 0, 1,
                         0, 0, 1, 0,
                         0, 1, 0, 0});
}
GateMatrix build_cz(std::span<const double>) {
    return from_rows(4, {1, 0, 0, 0,
                         0, 1, 0, 0,
                         0, 0, 1, 0,
                         0, 0, 0, -1});
}
GateMatrix build_swap(std::span<const double>) {
    return from_rows(4, {1, 0, 0, 0,
                         0, 0, 1, 0,
                         0, 1, 0, 0,
                         0, 0, 0, 1});
}

GateMatrix permutation3(int a, int b) {
    GateMatrix m;
    m.dim = 8;
    m.data.assign(64, 0);
    for (int i = 0; i < 8; ++i) {
        int j = i == a ? b : i == b ? a : i;
        m.at(j, i) = 1;
    }
    return m;
}

// ccx: controls are operands 0,1; target operand 2 -> exchanges |011> and |111>.
GateMatrix build_ccx(std::span<const double>) {
    return permutation3(0b011, 0b111);
}
// cswap: control operand 0; swaps operands 1,2 -> exchanges |011> and |101>.
GateMatrix build_cswap(std::span<const double>) {
    return permutation3(0b011, 0b101);
}

} // namespace

double unitarity_defect(const GateMatrix& u) {
    double worst = 0.0;
    for (int r = 0; r < u.dim; ++r) {
        for (int c = 0; c < u.dim; ++c) {
            cplx acc = 0;
            for (int k = 0; k < u.dim; ++k)
                acc += std::conj(u.at(k, r)) * u.at(k, c);
            double expect = r == c ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(acc - expect));
        }
    }
    return worst;
}

GateCatalog::GateCatalog() {
    gates_ = {
        {"id", 1, 0, build_id},    {"x", 1, 0, build_x},       {"y", 1, 0, build_y},
        {"z", 1, 0, build_z},      {"h", 1, 0, build_h},       {"s", 1, 0, build_s},
        {"sdg", 1, 0, build_sdg},  {"t", 1, 0, build_t},       {"tdg", 1, 0, build_tdg},
        {"rx", 1, 1, build_rx},    {"ry", 1, 1, build_ry},     {"rz", 1, 1, build_rz},
        {"p", 1, 1, build_p},      {"cx", 2, 0, build_cx},     {"cz", 2, 0, build_cz},
        {"swap", 2, 0, build_swap},{"ccx", 3, 0, build_ccx},   {"cswap", 3, 0, build_cswap},
    };

    const double sample_angles[] = {0.0, std::numbers::pi / 3, 1.2345};
    for (const auto& g : gates_) {
        if (g.param_count == 0) {
            if (unitarity_defect(g.build({})) > 1e-12)
                throw Error("gate catalog: " + g.name + " is not unitary");
        } else {
            for (double theta : sample_angles) {
                if (unitarity_defect(g.build(std::span(&theta, 1))) > 1e-12)
                    throw Error("gate catalog: " + g.name + " is not unitary");
            }
        }
    }
}

const GateCatalog& GateCatalog::instance() {
    static const GateCatalog catalog;
    return catalog;
}

const GateInfo* GateCatalog::find(const std::string& name) const {
    for (const auto& g : gates_)
        if (g.name == name) return &g;
    return nullptr;
}

std::vector<std::string> GateCatalog::replacement_family(const std::string& name) const {
    const GateInfo* self = find(name);
    std::vector<std::string> family;
    if (!self) return family;
    for (const auto& g : gates_)
        if (g.arity == self->arity && g.param_count == self->param_count && g.name != name)
            family.push_back(g.name);
    return family;
}

} // namespace qfl
