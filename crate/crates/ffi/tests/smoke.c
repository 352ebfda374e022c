#include <stdio.h>
#include "krall.h"

int main(void) {
    const char *a[] = {"1"};
    KrallSpec *spec = NULL;
    if (krall_spec_new(1, "0", a, 1, &spec) != KRALL_STATUS_OK) {
        fprintf(stderr, "%s\n", krall_last_error());
        return 1;
    }
    char *q = NULL;
    if (krall_qpoly_json(spec, 1, 0, &q) != KRALL_STATUS_OK) {
        return 1;
    }
    printf("%s\n", q);
    krall_string_free(q);

    KrallOperator *op = NULL;
    KrallStatus st = krall_fit(spec, "[\"0\",\"1\"]", &op);
    printf("not in algebra: %d\n", (int)st);
    krall_spec_free(spec);
    return st == KRALL_STATUS_NOT_IN_ALGEBRA ? 0 : 1;
}
