#include <stdio.h>
#include <string.h>

#include "sintegral.h"

int main(void) {
    SintCurve *curve = NULL;
    if (sint_curve_parse_implicit("x^2+y^2-1", false, &curve) != SINT_STATUS_OK) {
        return 10;
    }
    SintVerdict *verdict = NULL;
    if (sint_decide(curve, "5", 10000, &verdict) != SINT_STATUS_OK) {
        return 11;
    }
    if (sint_verdict_kind(verdict) != SINT_VERDICT_KIND_INFINITE) {
        return 12;
    }
    char *json = NULL;
    if (sint_generate_json(curve, "5", 10000, 3, &json) != SINT_STATUS_OK) {
        return 13;
    }
    puts(json);
    sint_string_free(json);
    sint_verdict_free(verdict);
    sint_curve_free(curve);

    SintCurve *bad = NULL;
    if (sint_curve_parse_implicit("2x+y", false, &bad) != SINT_STATUS_PARSE || bad != NULL) {
        return 14;
    }
    const char *msg = sint_last_error_message();
    if (msg == NULL || strstr(msg, "position 1") == NULL) {
        return 15;
    }
    return 0;
}
