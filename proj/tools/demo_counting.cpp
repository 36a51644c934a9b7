// Prints N_phi along a radius and the Carleson function for (1 + z)/2.
#include <cstdio>

#include <schur_scope.hpp>

int main() {
  using namespace schur_scope;
  const SchurMap lens = SchurMap::polynomial({0.5, 0.5});
  for (double r : {0.6, 0.8, 0.9, 0.99}) {
    std::printf("N(%.2f) = %.12f   log 1/|2w-1| = %.12f\n", r, counting_function(lens, r),
                std::log(1.0 / std::abs(2.0 * r - 1.0)));
  }
  for (double h : {0.1, 0.01, 0.001}) {
    const auto s = rho(lens, h);
    std::printf("rho(%g) = %.6g  rho/h = %.4f  nu/h = %.4f\n", h, s.value, s.value / h,
                nu(lens, h).value / h);
  }
}
