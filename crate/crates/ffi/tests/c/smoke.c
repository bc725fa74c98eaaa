#include <stdio.h>
#include "polariton_sn.h"

int main(void) {
    SnCavity *cavity = NULL;
    if (sn_cavity_new(1.5, 0.002, 0.01, 0.0, &cavity) != SN_STATUS_OK) return 1;
    double mags[3] = {0.025, 0.05, 0.075};
    SnState *state = NULL;
    if (sn_state_new(cavity, 1.0, 0.0, mags, 3, 0.5, 1.0, 0.0, 0.0, &state) != SN_STATUS_OK) return 2;
    SnCertificate *cert = NULL;
    if (sn_certify(state, 1e-7, &cert) != SN_STATUS_OK) return 3;
    size_t sn = sn_certificate_schmidt_number(cert);
    SnCavity *bad = NULL;
    if (sn_cavity_new(-1.0, 0.002, 0.01, 0.0, &bad) != SN_STATUS_INVALID_ARGUMENT || bad != NULL) return 4;
    char msg[256];
    if (sn_last_error_message(msg, sizeof msg) == 0) return 5;
    printf("sn=%zu\n", sn);
    sn_certificate_free(cert);
    sn_state_free(state);
    sn_cavity_free(cavity);
    return sn == 8 ? 0 : 6;
}
