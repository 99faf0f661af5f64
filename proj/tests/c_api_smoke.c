/* Exercises the shared library from plain C: object lifecycle, a forward
 * pass, and the error-reporting path. Exits non-zero on any failure. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "rovernet/rovernet.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      failures++;                                                     \
    }                                                                 \
  } while (0)

int main(void) {
  const size_t layers[3] = {2, 3, 2};
  rvn_network* net = NULL;

  CHECK(rvn_network_create(layers, 3, 1.0, &net) == RVN_OK);
  CHECK(net != NULL);

  size_t count = 0;
  CHECK(rvn_network_layer_count(net, &count) == RVN_OK);
  CHECK(count == 3);

  /* A zero network with linear outputs maps everything to zero. */
  {
    const double input[2] = {0.25, -0.5};
    double output[2] = {9.0, 9.0};
    CHECK(rvn_network_forward(net, input, 2, output, 2) == RVN_OK);
    CHECK(output[0] == 0.0);
    CHECK(output[1] == 0.0);
  }

  /* Raising one output bias raises exactly that output. */
  CHECK(rvn_network_set_weight(net, 1, 0, 3, 0.75) == RVN_OK);
  {
    const double input[2] = {0.0, 0.0};
    double output[2] = {0.0, 0.0};
    double read_back = 0.0;
    CHECK(rvn_network_get_weight(net, 1, 0, 3, &read_back) == RVN_OK);
    CHECK(read_back == 0.75);
    CHECK(rvn_network_forward(net, input, 2, output, 2) == RVN_OK);
    CHECK(fabs(output[0] - 0.75) < 1e-12);
    CHECK(output[1] == 0.0);
  }

  /* Failures return a status code and leave a readable message. */
  {
    rvn_network* bad = NULL;
    const rvn_status status = rvn_network_create(NULL, 3, 1.0, &bad);
    CHECK(status == RVN_ERROR_INVALID_ARGUMENT);
    CHECK(bad == NULL);
    CHECK(strlen(rvn_last_error()) > 0);
    CHECK(strcmp(rvn_status_name(status), "RVN_ERROR_INVALID_ARGUMENT") == 0);
  }

  rvn_network_free(net);
  rvn_network_free(NULL); /* must be a no-op */

  if (failures > 0) {
    fprintf(stderr, "%d smoke-test failure(s)\n", failures);
    return 1;
  }
  printf("c_api_smoke: all checks passed\n");
  return 0;
}
