#pragma once

#include <memory>

#include "mlab/sl2.hpp"

namespace mlab {

// Monodromy traces of the t-family on the torus, evaluated by Taylor series
// integration along the two straight generator loops. Along the family the
// transport matrices grow like e^{t pi / 4} while z1 stays bounded and z2
// grows like e^{t pi / 2}, so the working precision is raised with t:
// roughly 1.3 t + 12 significant digits are carried.
struct FamilyRow {
    double t = 0.0;
    cplx x, y, z1, z2;
    double residual = 0.0;           // torus character equation, evaluated at working precision
    double identity_residual = 0.0;  // |z2 - (x y - z1)|
    double comm_defect = 0.0;        // |Tr(Y^-1 X^-1 Y X) - 2 cos 2 pi rho|
    double det_defect = 0.0;         // max |det - 1| of X and Y
    int digits = 0;                  // working precision in decimal digits
    Mat2C X, Y;                      // rounded to double
};

class FamilyEngine {
public:
    explicit FamilyEngine(double rho);
    ~FamilyEngine();
    FamilyEngine(const FamilyEngine&) = delete;
    FamilyEngine& operator=(const FamilyEngine&) = delete;

    double rho() const { return rho_; }

    FamilyRow evaluate(double t) const;
    FamilyRow evaluate_with_digits(double t, int digits) const;

    // Zero of Im x(t) inside [lo, hi] (Im x must change sign), located at
    // working precision until |Im x| < target. The row is evaluated at the
    // refined parameter; its t field is that parameter rounded to double.
    FamilyRow refine_real_crossing(double lo, double hi, double target = 1e-9) const;

    static int digits_needed(double t);
    static double max_t();

private:
    struct Impl;
    double rho_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mlab
