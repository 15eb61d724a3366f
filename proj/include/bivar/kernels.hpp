#ifndef BIVAR_KERNELS_HPP
#define BIVAR_KERNELS_HPP

#include <cstddef>

// Hot inner loops, implemented twice: a scalar reference and an AVX2 variant.
// The dispatcher picks one at startup from CPUID; tests run both tables and
// check they agree. Sums may differ from the scalar order by a few ulp
// (4 independent accumulators); max/count/first-exit reductions are exact.

namespace bivar::kern {

struct Ops {
    // sum_i |d[i]|^p   (p >= 1; fast paths for p = 1, 1.5, 2, 3)
    double (*sum_abs_pow)(const double* d, std::size_t n, double p);
    // sum_i |f[i+1] - f[i]|  over n points (n-1 increments)
    double (*sum_abs_adj_diff)(const double* f, std::size_t n);
    // max_j ( best[j] + |fi - f[j]|^p ),  n >= 1
    double (*max_plus_pow)(const double* best, const double* f, std::size_t n, double fi, double p);
    // sum_j ftag[j] * ((ghi[j+1] - glo[j+1]) - (ghi[j] - glo[j])),  j = 0..n-1
    double (*rs_cell_sum)(const double* ftag, const double* ghi, const double* glo, std::size_t n);
    // #{ i : |v[i] - x| < eps }  (strict)
    std::size_t (*count_in_band)(const double* v, std::size_t n, double x, double eps);
    // least i with |v[i] - c| >= r, or n if none
    std::size_t (*first_exit)(const double* v, std::size_t n, double c, double r);
    // max_i |a[i] - b[i]|
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    // max_i |a[i] - a0| * w[i]   (w >= 0)
    double (*max_scaled_diff)(const double* a, double a0, const double* w, std::size_t n);
    double (*sum)(const double* d, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();
const Ops& avx2_ops();    // valid to call only if avx2_available()
bool avx2_available();

enum class Isa { Auto, Scalar, Avx2 };

const Ops& active();
void force(Isa isa);      // throws hypothesis_error if the ISA is not available
const char* active_name();

}  // namespace bivar::kern

#endif
