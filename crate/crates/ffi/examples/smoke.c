/* Minimal caller: parse a function from JSON, conjugate it, evaluate the
 * result, and check that a misuse comes back as a status code instead of a
 * crash.
 *
 * Build from the workspace root after `cargo build --release -p fenchel-ffi`:
 *
 *   cc -std=c99 -Wall -I crates/ffi/include crates/ffi/examples/smoke.c \
 *      target/release/libfenchel_ffi.a -lm -o smoke
 */
#include <stdio.h>
#include <stdlib.h>
#include <math.h>
#include "fenchel.h"

int main(void) {
    /* f(x) = 2 x^2 on all of R: quadratic coefficient matrix Q = [4] */
    const char *json =
        "{\"dim\":1,\"C\":{\"rows\":0,\"cols\":1,\"data\":[]},"
        "\"d\":[],\"Q\":{\"rows\":1,\"cols\":1,\"data\":[4.0]},"
        "\"b\":[0.0],\"c\":0.0}";
    FenchelPcqf *f = NULL;
    if (fenchel_pcqf_from_json(json, &f) != FENCHEL_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", fenchel_last_error());
        return 1;
    }
    FenchelPcqf *conj = NULL;
    if (fenchel_pcqf_conjugate(f, 0.0, &conj) != FENCHEL_STATUS_OK) {
        fprintf(stderr, "conjugate: %s\n", fenchel_last_error());
        return 1;
    }
    double v = 0.0;
    double x = 2.0;
    if (fenchel_pcqf_evaluate(conj, &x, 1, &v) != FENCHEL_STATUS_OK) return 1;
    printf("conjugate of 2x^2 at 2 = %g (want 0.5)\n", v);
    int ok = fabs(v - 0.5) < 1e-10;

    /* error path: a point of the wrong arity */
    double xs[2] = {1.0, 2.0};
    FenchelStatus s = fenchel_pcqf_evaluate(conj, xs, 2, &v);
    ok = ok && s == FENCHEL_STATUS_DIMENSION_MISMATCH;
    printf("wrong arity -> status %d: %s\n", (int)s, fenchel_last_error());

    fenchel_pcqf_free(f);
    fenchel_pcqf_free(conj);
    return ok ? 0 : 1;
}
