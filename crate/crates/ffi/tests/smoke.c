#include <stdio.h>
#include <string.h>

#include "lcpforms.h"

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                      \
    }                                                                \
  } while (0)

int main(void) {
  LcpForm *omega = NULL;
  CHECK(lcp_form_standard(LCP_FORM_KIND_G2, &omega) == LCP_STATUS_OK);
  size_t stab = 0;
  CHECK(lcp_form_stabilizer_dim(omega, &stab) == LCP_STATUS_OK);
  CHECK(stab == 14);

  char *json = NULL;
  CHECK(lcp_form_to_json(omega, &json) == LCP_STATUS_OK);
  CHECK(strstr(json, "\"idx\":[1,2,7]") != NULL);
  lcp_string_free(json);

  LcpGroup *g = NULL;
  CHECK(lcp_group_from_frame("e1,e2,e3,e4", 0, &g) == LCP_STATUS_OK);
  CHECK(lcp_group_order(g) == 32);
  bool free_action = true;
  CHECK(lcp_group_is_free(g, &free_action) == LCP_STATUS_OK);
  CHECK(!free_action);

  LcpGroup *bad = NULL;
  CHECK(lcp_group_from_frame("e1,e2,e3", 4, &bad) == LCP_STATUS_CAP_EXCEEDED);
  CHECK(bad == NULL);
  CHECK(lcp_last_error_message() != NULL);

  lcp_group_free(g);
  lcp_form_free(omega);
  printf("ok %s\n", lcp_version());
  return 0;
}
