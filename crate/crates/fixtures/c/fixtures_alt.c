/* Second library exporting get_c with a distinguishable result, used to
 * check library-filtered symbol resolution. */
void get_c(double *input, int *index, double *output) {
    output[0] = -input[index[0] - 1];
}
