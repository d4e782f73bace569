#pragma once

#include <functional>
#include <string>

namespace curverecon {

// Prescribed data along the line x2 = 0: the two normal curvatures as
// functions of x1, and optionally the data-direction slope alpha0 and the
// base umbilic curvature lambda.
struct BoundaryData {
    double a1 = 1.0;
    std::function<double(double)> kbar1, kbar2;
    std::function<double(double)> alpha0;  // empty: take the ambient alpha field
    std::function<double(double)> lambda;  // empty: flat or externally checked

    bool has_alpha0() const { return bool(alpha0); }
    bool has_lambda() const { return bool(lambda); }

    // sup over [-a1, a1] of max(|kbar1|, |kbar2|), sampled
    double data_sup(int samples = 512) const;
};

BoundaryData boundary_constant(double a1, double kbar1, double kbar2);

// Expression-backed data; empty strings leave the optional fields unset.
BoundaryData boundary_analytic(double a1, const std::string& kbar1_expr,
                               const std::string& kbar2_expr, const std::string& alpha0_expr = "",
                               const std::string& lambda_expr = "");

// Columns: x1, kbar1, kbar2 [, alpha0] [, lambda]; cubic spline through the
// samples.  The grid must straddle zero; a1 is the covered half-width.
BoundaryData boundary_from_csv(const std::string& path);

}  // namespace curverecon
