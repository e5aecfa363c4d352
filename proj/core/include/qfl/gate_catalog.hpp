#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace qfl {

using cplx = std::complex<double>;

/// Dense row-major matrix over 2^k basis states of a k-qubit gate. Column
/// index bit j is the state of gate operand j (operand 0 is the least
/// significant bit).
struct GateMatrix {
    int dim = 0;
    std::vector<cplx> data;

    cplx& at(int r, int c) { return data[static_cast<size_t>(r) * dim + c]; }
    const cplx& at(int r, int c) const { return data[static_cast<size_t>(r) * dim + c]; }
};

struct GateInfo {
    std::string name;
    int arity = 0;
    int param_count = 0;
    GateMatrix (*build)(std::span<const double> params) = nullptr;
};

/// The fixed gate set: id,x,y,z,h,s,sdg,t,tdg,rx,ry,rz,p,cx,cz,swap,ccx,cswap.
/// Every matrix is verified unitary (U†U = I within 1e-12) the first time the
/// catalog is requested; a failed check aborts via Error.
class GateCatalog {
public:
    static const GateCatalog& instance();

    const GateInfo* find(const std::string& name) const;
    const std::vector<GateInfo>& gates() const { return gates_; }

    /// Gates interchangeable with `name` under replacement mutation: same
    /// arity and parameter count, in catalog order, excluding `name` itself.
    std::vector<std::string> replacement_family(const std::string& name) const;

private:
    GateCatalog();
    std::vector<GateInfo> gates_;
};

/// Maximum deviation of U†U from the identity.
double unitarity_defect(const GateMatrix& u);

} // namespace qfl
