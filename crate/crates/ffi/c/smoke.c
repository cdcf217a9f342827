/* Links against libstarseq_ffi and prints a few values. */
#include <stdio.h>
#include <string.h>

#include "starseq.h"

int main(void) {
    StarseqGross *g = NULL;
    char *term = NULL;
    if (starseq_gross_new("1", 0, &g) != STARSEQ_STATUS_OK) {
        return 1;
    }
    for (size_t k = 0; k < 6; k++) {
        if (starseq_gross_term(g, k, &term) != STARSEQ_STATUS_OK) {
            return 2;
        }
        printf(k ? " %s" : "%s", term);
        starseq_string_free(term);
    }
    printf("\n");
    starseq_gross_free(g);

    if (starseq_star("0", &term) != STARSEQ_STATUS_INVALID_ARGUMENT) {
        return 3;
    }
    char *msg = starseq_last_error();
    printf("error: %s\n", msg);
    starseq_string_free(msg);

    StarseqMother *m = starseq_mother_new(0);
    uint64_t occ[5];
    if (starseq_mother_occurrences(m, 5, 1, occ, 5) != STARSEQ_STATUS_OK) {
        return 4;
    }
    printf("%llu %llu %llu\n", (unsigned long long)occ[0], (unsigned long long)occ[1], (unsigned long long)occ[2]);
    starseq_mother_free(m);
    return 0;
}
