/* Callees for the dotcall64 engine. Every function takes only buffer
 * addresses and returns nothing, matching the .C calling convention. */
#include <stdint.h>

void get_c(double *input, int *index, double *output) {
    output[0] = input[index[0] - 1];
}

void get64_c(double *input, int64_t *index, double *output) {
    output[0] = input[index[0] - 1];
}

/* Stand-in for a Fortran subroutine compiled with the default naming
 * convention (lowercase, trailing underscore). */
void get_f_(double *input, int *index, double *output) {
    output[0] = input[index[0] - 1];
}

void BENCHMARK(void *a) { (void)a; }

void fill_seq(double *out, int64_t *n) {
    for (int64_t i = 0; i < n[0]; i++) {
        out[i] = (double)(i + 1);
    }
}

void mutate_all(double *buf, int64_t *n) {
    for (int64_t i = 0; i < n[0]; i++) {
        buf[i] += 1.0;
    }
}
