#ifndef LCPFORMS_H
#define LCPFORMS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Standard structure forms.
 */
typedef enum LcpFormKind {
  LCP_FORM_KIND_G2 = 0,
  LCP_FORM_KIND_SPIN7 = 1,
  LCP_FORM_KIND_SPIN7_OCTONIONIC = 2,
} LcpFormKind;

/*
 Result of every fallible call.
 */
typedef enum LcpStatus {
  LCP_STATUS_OK = 0,
  LCP_STATUS_NULL_POINTER = 1,
  LCP_STATUS_INVALID_ARGUMENT = 2,
  LCP_STATUS_PARSE = 3,
  LCP_STATUS_DIMENSION_MISMATCH = 4,
  LCP_STATUS_DEGREE_MISMATCH = 5,
  LCP_STATUS_INVALID_INDEX = 6,
  LCP_STATUS_NOT_ORTHONORMAL = 7,
  LCP_STATUS_CAP_EXCEEDED = 8,
  LCP_STATUS_ORDER_MISMATCH = 9,
  LCP_STATUS_CONVENTION_MISMATCH = 10,
  LCP_STATUS_NUMERIC = 11,
  LCP_STATUS_IO = 12,
  LCP_STATUS_PANIC = 13,
} LcpStatus;

/*
 Opaque exact differential form.
 */
typedef struct LcpForm LcpForm;

/*
 Opaque finite matrix group.
 */
typedef struct LcpGroup LcpGroup;

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next `lcp_*` call on the same thread.
 */
const char *lcp_last_error_message(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void lcp_string_free(char *s);

/*
 Library version as a static NUL-terminated string.
 */
const char *lcp_version(void);

/*
 # Safety
 `out` must be valid for writes.
 */
enum LcpStatus lcp_form_standard(enum LcpFormKind kind, struct LcpForm **out);

/*
 Parses `{"dim":..,"degree":..,"terms":[{"idx":[..],"coef":"p/q"}]}`.

 # Safety
 `json` must be a NUL-terminated string; `out` valid for writes.
 */
enum LcpStatus lcp_form_from_json(const char *json, struct LcpForm **out);

/*
 # Safety
 `form` must be a live handle; `out` valid for writes.
 */
enum LcpStatus lcp_form_to_json(const struct LcpForm *form, char **out);

/*
 # Safety
 `form` must be a live handle or null.
 */
size_t lcp_form_dim(const struct LcpForm *form);

/*
 # Safety
 `form` must be a live handle or null.
 */
size_t lcp_form_degree(const struct LcpForm *form);

/*
 Dimension of the stabilizer of the form in `so(n)`.

 # Safety
 `form` must be a live handle; `out` valid for writes.
 */
enum LcpStatus lcp_form_stabilizer_dim(const struct LcpForm *form, size_t *out);

/*
 # Safety
 `a`, `b` must be live handles; `out` valid for writes.
 */
enum LcpStatus lcp_form_wedge(const struct LcpForm *a,
                              const struct LcpForm *b,
                              struct LcpForm **out);

/*
 # Safety
 `a` must be a live handle; `out` valid for writes.
 */
enum LcpStatus lcp_form_hodge(const struct LcpForm *a, struct LcpForm **out);

/*
 True when the two forms are exactly equal.

 # Safety
 `a`, `b` must be live handles or null.
 */
bool lcp_form_equal(const struct LcpForm *a, const struct LcpForm *b);

/*
 # Safety
 `form` must come from this library and not be freed twice. Null is ignored.
 */
void lcp_form_free(struct LcpForm *form);

/*
 Group generated by right multiplications by a frame given as basis
 labels, e.g. `"e1,e2,-e7"`. Fails unless the order is `2^(m+1)`.
 `cap == 0` selects the default cap.

 # Safety
 `labels` must be a NUL-terminated string; `out` valid for writes.
 */
enum LcpStatus lcp_group_from_frame(const char *labels, size_t cap, struct LcpGroup **out);

/*
 Closure of generator matrices given as JSON (a list of
 `{"dim":n,"rows":[[..]]}` or `{"generators":[..]}`).

 # Safety
 `json` must be a NUL-terminated string; `out` valid for writes.
 */
enum LcpStatus lcp_group_from_generators_json(const char *json, size_t cap, struct LcpGroup **out);

/*
 The order-8 quaternionic example in `Sp(2)`.

 # Safety
 `out` must be valid for writes.
 */
enum LcpStatus lcp_group_sp2_example(struct LcpGroup **out);

/*
 # Safety
 `group` must be a live handle or null.
 */
size_t lcp_group_order(const struct LcpGroup *group);

/*
 Whether the group acts freely on the unit sphere.

 # Safety
 `group` must be a live handle; `out` valid for writes.
 */
enum LcpStatus lcp_group_is_free(const struct LcpGroup *group, bool *out);

/*
 Classification report (order, freeness with witnesses, preservation of
 `form`) as JSON.

 # Safety
 `group`, `form` must be live handles; `out` valid for writes.
 */
enum LcpStatus lcp_group_classify_json(const struct LcpGroup *group,
                                       const struct LcpForm *form,
                                       char **out);

/*
 Group file JSON: generators, labelled elements, metadata.

 # Safety
 `group` must be a live handle; `out` valid for writes.
 */
enum LcpStatus lcp_group_to_json(const struct LcpGroup *group, char **out);

/*
 # Safety
 `group` must come from this library and not be freed twice. Null is ignored.
 */
void lcp_group_free(struct LcpGroup *group);

#endif /* LCPFORMS_H */
