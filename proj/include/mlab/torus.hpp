#pragma once

#include <json.hpp>

#include "mlab/sl2.hpp"
#include "mlab/transport.hpp"
#include "mlab/weierstrass.hpp"

namespace mlab {

// Data of the abelianised connection on the square torus C/(Z+iZ) with one
// marked point at 0:
//   A = [[a dw + chi dw-bar, g_minus dw], [g_plus dw, -(a dw + chi dw-bar)]]
// with g_plus = e^{2 chi w-bar} h_plus(w), g_minus = e^{-2 chi w-bar} h_minus(w),
// h = r e^{mu w} sigma(w - d) / (sigma(w) sigma(-d)).
struct TorusParams {
    cplx a{}, chi{};
    double rho = 0.0;
    cplx mu_plus{}, mu_minus{};
    cplx d_plus{}, d_minus{};
    cplx r_plus{}, r_minus{};
};

class TorusConnection {
public:
    explicit TorusConnection(const TorusParams& p);

    const TorusParams& params() const { return p_; }
    cplx gamma_plus(cplx w) const;
    cplx gamma_minus(cplx w) const;
    Mat2C operator()(cplx w, cplx dw) const;
    Field field() const;

    // Gauge rescaling g_plus -> c g_plus, g_minus -> g_minus / c.
    TorusConnection rescaled(cplx c) const;

private:
    TorusParams p_;
    SquareSigma<double> sigma_;
    cplx sigma_minus_d_plus_, sigma_minus_d_minus_;
};

// Solves the multiplier conditions for (mu, d): the section e^{s w-bar} h(w)
// is lattice periodic iff mu l - eta(l) d = -s conj(l) + 2 pi i n_l for l in {1, i}.
// The branch integers select one of the equivalent solutions.
struct MultiplierSolution {
    cplx mu, d;
};
MultiplierSolution solve_multiplier(cplx s, int n_one = 0, int n_i = 0);

bool is_degenerate_chi(cplx chi, double eps = 1e-12);

TorusConnection build_torus_conn(cplx a, cplx chi, double rho, int n_one = 0, int n_i = 0);

cplx torus_a0();
cplx torus_chi0();
TorusConnection family_t(double t, double rho);

bool eta_symmetric(cplx a, cplx chi);

struct TorusLoops {
    Path x, y, comm;
};
cplx torus_basepoint();
TorusLoops torus_loops();
int winding_number(const Path& p, cplx point, int samples_per_segment = 2000);

struct TorusMonodromy {
    Mat2C X, Y;
    cplx x, y, z1, z2, comm_trace;
};
TorusMonodromy torus_monodromy(const TorusConnection& conn, TransportOptions opt = {});

// Residual of (d-bar - 2 chi) g_plus and (d-bar + 2 chi) g_minus at sample points.
double holomorphy_residual(const TorusConnection& conn, int samples = 50, unsigned seed = 11);
double periodicity_residual(const TorusConnection& conn, int samples = 50, unsigned seed = 13);
// |Res_0 (g_plus g_minus) (dw)^2 - rho^2|
double quadratic_residue_defect(const TorusConnection& conn);

nlohmann::json to_json(const TorusParams& p);

}  // namespace mlab
