#include <math.h>
#include <stdio.h>

#include "pslab.h"

#define CHECK(call)                                                          \
    do {                                                                     \
        PslabStatus st_ = (call);                                            \
        if (st_ != PSLAB_STATUS_OK) {                                        \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)st_, pslab_last_error()); \
            return 1;                                                        \
        }                                                                    \
    } while (0)

int main(void) {
    PslabCurve *curve = NULL;
    PslabSurface *surface = NULL;
    CHECK(pslab_curve_builtin("alpha0", &curve));
    CHECK(pslab_surface_new(curve, -3.0, 3.0, &surface));
    pslab_curve_free(curve);

    double x[5];
    CHECK(pslab_surface_position(surface, 0.5, 0.7, x));
    double q = -x[0] * x[0] - x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + x[4] * x[4];

    PslabCurvature k;
    CHECK(pslab_surface_curvature(surface, 0.5, 0.7, &k));

    double c, c4;
    CHECK(pslab_surface_congruence_coefficient(surface, 0.0, 0.7853981633974483, &c, &c4));

    PslabCongruence cong;
    CHECK(pslab_surface_congruence_test(surface, 0.3, 1.2707963267948966, 10, 10, 1e-8, &cong));
    pslab_surface_free(surface);

    if (pslab_curve_builtin("nope", &curve) != PSLAB_STATUS_UNKNOWN_BUILTIN) return 2;

    printf("%s %.3e %.12f %.12f %.6f %.6f %d\n", pslab_version(), fabs(q - 1.0), k.k,
           k.k_normal_abs, c, c4, (int)cong.verdict);
    return 0;
}
