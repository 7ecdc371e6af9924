#ifndef TIGRIS_H
#define TIGRIS_H

/* Generated by cbindgen from tigris-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. Anything but `Ok` leaves details in
 * [`tigris_last_error_message`].
 */
typedef enum TigrisStatus {
  TIGRIS_STATUS_OK = 0,
  TIGRIS_STATUS_NULL_ARGUMENT = 1,
  TIGRIS_STATUS_INVALID_INPUT = 2,
  TIGRIS_STATUS_IO = 3,
  TIGRIS_STATUS_PARSE = 4,
  TIGRIS_STATUS_PLAN_FAILED = 5,
  TIGRIS_STATUS_INVALID_UTF8 = 6,
  TIGRIS_STATUS_INDEX_OUT_OF_RANGE = 7,
} TigrisStatus;

/**
 * Planner selector.
 */
typedef enum TigrisPlanner {
  TIGRIS_PLANNER_TIGRIS = 0,
  TIGRIS_PLANNER_RIG = 1,
} TigrisPlanner;

/**
 * Opaque plan-result handle.
 */
typedef struct TigrisPlanResult TigrisPlanResult;

/**
 * Opaque scenario handle.
 */
typedef struct TigrisScenario TigrisScenario;

/**
 * A vehicle pose: position in meters, heading in radians.
 */
typedef struct TigrisState {
  double x;
  double y;
  double z;
  double psi;
} TigrisState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; valid until the next
 * failing call on the same thread. Never null.
 */
const char *tigris_last_error_message(void);

/**
 * Loads a scenario from a TOML file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. On success `*out` owns the scenario and must be released with
 * [`tigris_scenario_free`].
 */
enum TigrisStatus tigris_scenario_load(const char *path, struct TigrisScenario **out);

/**
 * Parses a scenario from TOML text.
 *
 * # Safety
 * As [`tigris_scenario_load`], with `text` holding the document itself.
 */
enum TigrisStatus tigris_scenario_parse(const char *text, struct TigrisScenario **out);

/**
 * Generates a scenario from the built-in desk-scale template.
 *
 * # Safety
 * `out` must be a valid pointer; release the result with
 * [`tigris_scenario_free`].
 */
enum TigrisStatus tigris_scenario_generate(uint64_t seed, struct TigrisScenario **out);

/**
 * Serializes a scenario to TOML.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be valid. The returned
 * string must be released with [`tigris_string_free`].
 */
enum TigrisStatus tigris_scenario_to_toml(const struct TigrisScenario *scenario, char **out);

/**
 * # Safety
 * `scenario` must come from this library and not already be freed.
 */
void tigris_scenario_free(struct TigrisScenario *scenario);

/**
 * Runs a planner on the scenario.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be valid. On success `*out`
 * owns the result and must be released with [`tigris_result_free`].
 */
enum TigrisStatus tigris_plan(const struct TigrisScenario *scenario,
                              enum TigrisPlanner planner,
                              struct TigrisPlanResult **out);

/**
 * Sets the iteration budget on the scenario's planner configuration.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum TigrisStatus tigris_scenario_set_iterations(struct TigrisScenario *scenario,
                                                 uint64_t iterations);

/**
 * Sets the planner seed.
 *
 * # Safety
 * `scenario` must be a live handle.
 */
enum TigrisStatus tigris_scenario_set_seed(struct TigrisScenario *scenario, uint64_t seed);

/**
 * Total information reward of the result (NaN for a null handle).
 *
 * # Safety
 * `result` must be a live handle or null.
 */
double tigris_result_info(const struct TigrisPlanResult *result);

/**
 * Path cost in meters (NaN for a null handle).
 *
 * # Safety
 * `result` must be a live handle or null.
 */
double tigris_result_cost(const struct TigrisPlanResult *result);

/**
 * Number of states on the returned path (0 for a null handle).
 *
 * # Safety
 * `result` must be a live handle or null.
 */
size_t tigris_result_state_count(const struct TigrisPlanResult *result);

/**
 * Number of nodes in the finished search tree (0 for a null handle).
 *
 * # Safety
 * `result` must be a live handle or null.
 */
size_t tigris_result_node_count(const struct TigrisPlanResult *result);

/**
 * Copies path state `index` into `out`.
 *
 * # Safety
 * `result` must be a live handle; `out` must be valid.
 */
enum TigrisStatus tigris_result_state(const struct TigrisPlanResult *result,
                                      size_t index,
                                      struct TigrisState *out);

/**
 * Number of points on the reward-over-time curve.
 *
 * # Safety
 * `result` must be a live handle or null.
 */
size_t tigris_result_curve_len(const struct TigrisPlanResult *result);

/**
 * Copies curve point `index` (x = iteration or seconds, y = best reward).
 *
 * # Safety
 * `result` must be a live handle; `x` and `y` must be valid.
 */
enum TigrisStatus tigris_result_curve_point(const struct TigrisPlanResult *result,
                                            size_t index,
                                            double *x,
                                            double *y);

/**
 * Serializes the result to the TOML result-file format.
 *
 * # Safety
 * `result` must be a live handle; `out` must be valid. Release the string
 * with [`tigris_string_free`].
 */
enum TigrisStatus tigris_result_to_toml(const struct TigrisPlanResult *result, char **out);

/**
 * # Safety
 * `result` must come from this library and not already be freed.
 */
void tigris_result_free(struct TigrisPlanResult *result);

/**
 * # Safety
 * `s` must be a string returned by this library and not already freed.
 */
void tigris_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TIGRIS_H */
