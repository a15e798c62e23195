#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mlab/sl2.hpp"

namespace mlab {

struct Pole {
    bool at_infinity = false;
    cplx z{};

    static Pole infinity() { return {true, {}}; }
    static Pole finite(cplx p) { return {false, p}; }
};

// Matrix valued rational 1-form A(z) dz in partial fraction normal form:
//   A(z) = sum_j R_j / (z - p_j) + sum_k P_k z^k
// with simple finite poles p_j. Infinity is a pole exactly when sum_j R_j != 0
// and the polynomial part vanishes.
class RationalMatrixForm {
public:
    RationalMatrixForm() = default;
    RationalMatrixForm(std::vector<cplx> poles, std::vector<Mat2C> residues, std::vector<Mat2C> polynomial = {});

    Mat2C operator()(cplx z) const;

    const std::vector<cplx>& finite_poles() const { return poles_; }
    const std::vector<Mat2C>& finite_residues() const { return residues_; }
    const std::vector<Mat2C>& polynomial_part() const { return poly_; }

    // All poles including infinity when present.
    std::vector<Pole> pole_set() const;

    Mat2C residue(const Pole& p) const;
    Mat2C residue(cplx p) const { return residue(Pole::finite(p)); }
    bool has_pole(const Pole& p) const;

    RationalMatrixForm operator+(const RationalMatrixForm& o) const;
    RationalMatrixForm operator*(cplx s) const;

    // max |tr A(z)| over sample points
    double trace_residual(unsigned seed = 7) const;

private:
    int index_of(cplx p) const;

    std::vector<cplx> poles_;
    std::vector<Mat2C> residues_;
    std::vector<Mat2C> poly_;
};

struct MeromorphicConnection {
    RationalMatrixForm form;
    std::string label;
    double weight = 0.0;  // 0 when no weight applies

    Mat2C operator()(cplx z) const { return form(z); }
};

struct ParabolicData {
    std::vector<Pole> points;
    std::vector<double> weights;
    std::vector<std::array<cplx, 2>> lines;
};

MeromorphicConnection build_nabla_s3(double rho_t);
MeromorphicConnection build_D(double rho_t);
MeromorphicConnection build_nabla_tilde(double rho_t);
RationalMatrixForm build_phi();
MeromorphicConnection family_D_tau(double rho_t, cplx tau);
MeromorphicConnection connection_by_label(const std::string& label, double rho_t);

Mat2C residue(const MeromorphicConnection& conn, const Pole& p);
Mat2C residue(const MeromorphicConnection& conn, cplx p);

bool is_nonresonant(const MeromorphicConnection& conn);
ParabolicData induced_parabolic(const MeromorphicConnection& conn);
double parabolic_degree(const ParabolicData& pd, int sub_degree, const std::vector<bool>& incidence);

// Half the modulus of the period of sqrt(4i/(z^4-1)) dz over a circle with the
// given centre and radius; the circle must enclose exactly the poles 1 and i.
double period_half_modulus(cplx centre, double radius, double tol = 1e-10);
double pullback_period_c();
cplx tau_from_t(double t, double c);

nlohmann::json to_json(const RationalMatrixForm& f);
RationalMatrixForm form_from_json(const nlohmann::json& j);

}  // namespace mlab
