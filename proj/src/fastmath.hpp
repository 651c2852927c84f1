#pragma once

#include <cstdint>
#include <cstring>
#include <cstddef>

namespace wedgefield::detail {

/// Element-wise sin and cos, accurate to a few ulp for |x| < 1e6. Written as
/// straight-line arithmetic so the loop vectorizes.
inline void sincosBlock(const double* x, double* s, double* c, std::size_t n) {
  constexpr double kTwoOverPi = 0.63661977236758134308;
  constexpr double kPio2a = 1.57079632673412561417e+00;
  constexpr double kPio2b = 6.07710050630396597660e-11;
  constexpr double kPio2c = 2.02226624879595063154e-21;
  constexpr double kShift = 6755399441055744.0;  // 1.5 * 2^52
  for (std::size_t k = 0; k < n; ++k) {
    const double t = x[k] * kTwoOverPi + kShift;
    std::uint64_t bits;
    std::memcpy(&bits, &t, sizeof bits);
    const double j = t - kShift;
    const double r = ((x[k] - j * kPio2a) - j * kPio2b) - j * kPio2c;
    const double z = r * r;
    const double ps =
        r + r * z *
                (-1.66666666666666307295e-1 +
                 z * (8.33333333332211858878e-3 +
                      z * (-1.98412698295895385996e-4 +
                           z * (2.75573136213857245213e-6 +
                                z * (-2.50507477628578072866e-8 + z * 1.58962301576546568060e-10)))));
    const double pc =
        1.0 - 0.5 * z +
        z * z *
            (4.16666666666665929218e-2 +
             z * (-1.38888888888730564116e-3 +
                  z * (2.48015872888517045348e-5 +
                       z * (-2.75573141792967388112e-7 +
                            z * (2.08757008419747316778e-9 + z * -1.13585365213876817300e-11)))));
    // Quadrant select and sign flips as bit operations.
    std::uint64_t sb, cb;
    std::memcpy(&sb, &ps, sizeof sb);
    std::memcpy(&cb, &pc, sizeof cb);
    const std::uint64_t odd = 0 - (bits & 1);
    const std::uint64_t sw = (sb & ~odd) | (cb & odd);
    const std::uint64_t cw = (cb & ~odd) | (sb & odd);
    const std::uint64_t so = sw ^ ((bits & 2) << 62);
    const std::uint64_t co = cw ^ (((bits + 1) & 2) << 62);
    std::memcpy(&s[k], &so, sizeof so);
    std::memcpy(&c[k], &co, sizeof co);
  }
}

}  // namespace wedgefield::detail
