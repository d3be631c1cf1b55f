#include <stdio.h>
#include "uimpl.h"

int main(void) {
    UimplModel *model = NULL;
    if (uimpl_model_jaynes_cummings(10.0, 0.19634954084936207, 8.0, 1.0, 0, &model) != UIMPL_STATUS_OK) {
        fprintf(stderr, "%s\n", uimpl_last_error_message());
        return 1;
    }
    UimplReport *report = NULL;
    UimplStatus st = uimpl_model_evaluate(model, 2000, 42, &report);
    if (st == UIMPL_STATUS_OK) {
        UimplMetrics m;
        uimpl_report_metrics(report, &m);
        printf("delta_u %.17g delta_e %.17g\n", m.delta_u, m.delta_e);
        char *json = NULL;
        uimpl_report_to_json(report, &json);
        uimpl_string_free(json);
    }
    uimpl_report_free(report);
    uimpl_model_free(model);
    return st == UIMPL_STATUS_OK ? 0 : 1;
}
