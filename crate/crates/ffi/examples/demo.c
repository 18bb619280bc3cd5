/* Runs a two-site ring and prints the agent's Bloch vector. */
#include <stdio.h>
#include "spinring_ffi.h"

int main(void) {
    SpinringNetwork *net = NULL;
    if (spinring_network_new_from_json("{\"M\": 2}", &net) != SPINRING_STATUS_OK) {
        fprintf(stderr, "%s\n", spinring_last_error_message());
        return 1;
    }
    if (spinring_network_run(net, 40) != SPINRING_STATUS_OK) {
        fprintf(stderr, "%s\n", spinring_last_error_message());
        spinring_network_free(net);
        return 1;
    }
    double b[3];
    double total, defect;
    spinring_network_bloch(net, 0, b);
    spinring_network_sum_rule(net, &total, &defect);
    printf("%.17g %.17g %.17g\n%.17g\n", b[0], b[1], b[2], defect);

    SpinringStatus s = spinring_network_bloch(net, 9, b);
    printf("%d\n", (int)s);
    spinring_network_free(net);
    return 0;
}
