#include <stdio.h>
#include "bjorth.h"

int main(void) {
    BjSpace *s = NULL;
    if (bj_space_from_preset("regular_2n_gon(4)", &s) != BJ_STATUS_OK) return 1;
    double e = 0.0;
    if (bj_epsilon_x(s, &e) != BJ_STATUS_OK) return 2;
    double x[2] = {1.0, 0.0}, y[2] = {0.0, 1.0};
    bool holds = false;
    double margin = 0.0;
    if (bj_eps_orthogonal(s, x, y, 2, 0.0, 1e-9, &holds, &margin) != BJ_STATUS_OK || !holds) return 3;
    if (bj_space_from_preset("bogus", &s) != BJ_STATUS_PARSE || bj_last_error() == NULL) return 4;
    printf("%.12f\n", e);
    bj_space_free(s);
    return 0;
}
