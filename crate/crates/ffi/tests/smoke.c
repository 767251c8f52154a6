#include <stdio.h>
#include "pcs.h"

int main(void) {
    PcsGraph *g = NULL;
    PcsIndex *idx = NULL;
    PcsResult *r = NULL;
    if (pcs_graph_fixture(&g) != PCS_STATUS_OK) return 10;
    if (pcs_index_build(g, &idx) != PCS_STATUS_OK) return 11;
    if (pcs_query(idx, NULL, 3, 2, PCS_ALGORITHM_ADV_P, &r) != PCS_STATUS_OK) return 12;
    size_t n = pcs_result_len(r);
    printf("%zu\n", n);
    for (size_t i = 0; i < n; i++) {
        size_t len = 0;
        const uint32_t *v = pcs_result_vertices(r, i, &len);
        for (size_t j = 0; j < len; j++) printf("%s%u", j ? "," : "", v[j]);
        printf("\n");
    }
    if (pcs_query(idx, NULL, 99, 2, PCS_ALGORITHM_INCRE, &r) != PCS_STATUS_OUT_OF_RANGE) return 13;
    printf("%s\n", pcs_last_error());
    pcs_result_free(r);
    pcs_index_free(idx);
    pcs_graph_free(g);
    return 0;
}
