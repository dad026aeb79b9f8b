#include <math.h>
#include <stdio.h>
#include "toroid.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    ToroidCurvature c;
    CHECK(toroid_torus_curvatures(0.5, 1.0, 0.0, &c) == TOROID_STATUS_OK);
    CHECK(fabs(c.potential + 2.0 / 9.0) < 1e-14);

    ToroidSpectrum *s = NULL;
    CHECK(toroid_spectrum_solve(0.25, 1, TOROID_PARITY_EVEN, true, 64, &s) == TOROID_STATUS_OK);
    ToroidStateInfo info;
    CHECK(toroid_spectrum_state(s, 0, &info) == TOROID_STATUS_OK);
    CHECK(fabs(info.beta + 0.1987) < 2e-3);
    double coeffs[3];
    size_t total = 0;
    CHECK(toroid_spectrum_coeffs(s, 0, coeffs, 3, &total) == TOROID_STATUS_OK);
    CHECK(total == 65);
    toroid_spectrum_free(s);

    CHECK(toroid_spectrum_solve(1.5, 0, TOROID_PARITY_EVEN, true, 64, &s) == TOROID_STATUS_INVALID_ALPHA);
    char msg[128];
    CHECK(toroid_last_error(msg, sizeof msg) > 0);
    printf("beta=%.6f last_error=%s\n", info.beta, msg);
    return 0;
}
