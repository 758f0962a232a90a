#include <stdio.h>
#include <string.h>
#include "sulcheck.h"

int main(void) {
    const char *src =
        "states: s t\n"
        "edges: s -> s, s -> t, t -> t\n"
        "atom p: s\n"
        "default_cost: 1\n"
        "point: s\n";
    SulModel *m = NULL;
    SulFormula *f = NULL;
    bool v = false;
    if (sul_model_parse(src, &m) != SUL_STATUS_OK) return 10;
    if (sul_formula_parse("<d:1> G p", &f) != SUL_STATUS_OK) return 11;
    if (sul_check(m, NULL, f, &v) != SUL_STATUS_OK || !v) return 12;
    if (sul_check(m, "t", f, &v) != SUL_STATUS_OK || v) return 13;
    char *nnf = sul_formula_nnf(f);
    printf("%s\n", nnf);
    sul_string_free(nnf);
    sul_formula_free(f);
    if (sul_formula_parse("<d:1> p", &f) != SUL_STATUS_PARSE_ERROR) return 14;
    if (sul_last_error() == NULL || strlen(sul_last_error()) == 0) return 15;
    sul_model_free(m);
    return 0;
}
