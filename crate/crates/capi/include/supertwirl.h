#ifndef SUPERTWIRL_H
#define SUPERTWIRL_H

/* Generated with cbindgen:0.27.0 */

/* This file is generated by cbindgen from supertwirl-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// How the Hoeffding bound consumes the confidence level.
typedef enum StPlanMode {
  // Reproduce the headline arithmetic (confidence plugged in directly).
  ST_PLAN_MODE_PAPER_LITERAL = 0,
  // Standard Hoeffding with failure probability 1 − alpha.
  ST_PLAN_MODE_RIGOROUS = 1,
} StPlanMode;

// Status code returned by every fallible call.
typedef enum StStatus {
  ST_STATUS_OK = 0,
  // A required pointer argument was null.
  ST_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  ST_STATUS_INVALID_UTF8 = 2,
  // A spec string or JSON document could not be parsed.
  ST_STATUS_PARSE_ERROR = 3,
  // The Kraus data does not describe a CPTP channel.
  ST_STATUS_INVALID_CHANNEL = 4,
  // Matrix or register dimensions do not line up.
  ST_STATUS_DIMENSION_ERROR = 5,
  // A numeric parameter is outside its admissible range.
  ST_STATUS_PARAMETER_ERROR = 6,
  // A quantity that must be real or physical is not.
  ST_STATUS_NUMERICAL_ERROR = 7,
  // SPAM noise destroyed the distinguishability of the preparations.
  ST_STATUS_DEGENERATE_SPAM = 8,
  // Any other internal failure.
  ST_STATUS_INTERNAL_ERROR = 9,
} StStatus;

// How the twirl is computed.
typedef enum StTwirlMethod {
  // Conjugate by the fixed 24-dimensional gate and trace out the ancillas.
  ST_TWIRL_METHOD_SUPERMAP = 0,
  // Brute-force average over the 12-element 2-design.
  ST_TWIRL_METHOD_ORACLE_GROUP = 1,
  // Brute-force average over the 24-element Clifford group.
  ST_TWIRL_METHOD_ORACLE_CLIFFORD = 2,
} StTwirlMethod;

// Opaque channel handle.
typedef struct StChannel StChannel;

// Hoeffding shot budget.
typedef struct StSamplePlan {
  double epsilon;
  double alpha;
  uint64_t n_per_experiment;
  uint64_t n_total;
} StSamplePlan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the most recent error message on this thread as a caller-owned
// string (release with [`supertwirl_string_free`]), or null if no error has
// occurred.
char *supertwirl_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a pointer previously returned by this library and not
// yet freed.
void supertwirl_string_free(char *s);

// Library version as a static string; do not free.
const char *supertwirl_version(void);

// Builds a channel from a spec string: `identity`, `depolarizing:p`,
// `dephasing:p`, `amp_damp:p`, or the path of a channel JSON file.
//
// # Safety
// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
enum StStatus supertwirl_channel_from_spec(const char *spec, struct StChannel **out);

// Builds a channel from a JSON document
// `{"dim": d, "kraus": [[[ [re, im], ... ], ...], ...]}`.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum StStatus supertwirl_channel_from_json(const char *json, struct StChannel **out);

// Releases a channel handle.
//
// # Safety
// `channel` must be null or a handle previously returned by this library
// and not yet freed.
void supertwirl_channel_free(struct StChannel *channel);

// Hilbert-space dimension of the channel, or 0 for a null handle.
//
// # Safety
// `channel` must be null or a valid handle.
size_t supertwirl_channel_dim(const struct StChannel *channel);

// Number of Kraus operators, or 0 for a null handle.
//
// # Safety
// `channel` must be null or a valid handle.
size_t supertwirl_channel_kraus_count(const struct StChannel *channel);

// Copies Kraus operator `index` into `out`, which must hold `2·dim·dim`
// doubles (row-major, interleaved re/im).
//
// # Safety
// `channel` must be a valid handle and `out` a buffer of the stated size.
enum StStatus supertwirl_channel_kraus(const struct StChannel *channel, size_t index, double *out);

// Serializes the channel to its JSON wire form; the string is caller-owned.
//
// # Safety
// `channel` must be a valid handle and `out_json` a valid pointer.
enum StStatus supertwirl_channel_to_json(const struct StChannel *channel, char **out_json);

// Twirls the channel and writes the 4×4 transfer matrix into `out_ptm`
// (32 doubles, row-major interleaved re/im) and the depolarizing parameter
// into `out_eta`. Either output pointer may be null to skip it.
//
// # Safety
// `channel` must be a valid handle; non-null output pointers must have the
// stated capacity.
enum StStatus supertwirl_twirl_ptm(const struct StChannel *channel,
                                   enum StTwirlMethod method,
                                   double *out_ptm,
                                   double *out_eta);

// Twirls the channel through the ancilla gate and returns the resulting
// channel as a new handle.
//
// # Safety
// `channel` must be a valid handle and `out` a valid pointer.
enum StStatus supertwirl_twirl_channel(const struct StChannel *channel, struct StChannel **out);

// Runs the four-experiment protocol and returns the report as a JSON
// string (caller-owned). `prep` and `meas` may be null for ideal SPAM;
// `shots` = 0 selects exact mode.
//
// # Safety
// Non-null handles must be valid; `out_json` must be a valid pointer.
enum StStatus supertwirl_estimate(const struct StChannel *target,
                                  const struct StChannel *prep,
                                  const struct StChannel *meas,
                                  uint64_t shots,
                                  uint64_t seed,
                                  char **out_json);

// Computes the Hoeffding shot budget for accuracy `epsilon` and confidence
// `alpha`.
//
// # Safety
// `out` must be a valid pointer.
enum StStatus supertwirl_plan(double epsilon,
                              double alpha,
                              enum StPlanMode mode,
                              struct StSamplePlan *out);

// Dimension of the twirling gate (the full register), currently 24.
size_t supertwirl_gate_dim(void);

// Copies the twirling gate into `out`, which must hold `2·dim·dim` doubles
// with `dim` from [`supertwirl_gate_dim`] (row-major, interleaved re/im).
// The register factors are qubit ⊗ ququart ⊗ qutrit.
//
// # Safety
// `out` must be a buffer of the stated size.
enum StStatus supertwirl_gate_matrix(double *out);

// Writes the exact survival probabilities P(1)…P(m_max) of the twirled
// channel into `out` (`m_max` doubles).
//
// # Safety
// `channel` must be a valid handle and `out` a buffer of `m_max` doubles.
enum StStatus supertwirl_rb_curve(const struct StChannel *channel, size_t m_max, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERTWIRL_H */
