/* C interface to the wordsep word-separation laboratory.
 *
 * Conventions:
 *   - Machines are opaque handles; release them with ws_machine_free().
 *   - Structured inputs and outputs are JSON strings. Strings returned
 *     through a char** are owned by the caller: release them with
 *     ws_string_free(). ws_version() and ws_last_error() return borrowed
 *     pointers that must NOT be freed.
 *   - Every fallible call returns a WS_* status code. On failure,
 *     ws_last_error() describes the problem; the message is thread-local
 *     and valid until the next library call on the same thread.
 *   - The library never lets a panic cross this boundary; an internal
 *     panic is reported as WS_ERR_PANIC.
 *
 * Exact values are serialized as fraction strings ("101/201") next to a
 * lossy double ("approx") so callers can choose precision or convenience.
 */

#ifndef WORDSEP_H
#define WORDSEP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
#define WS_OK 0
/* Null pointer, invalid UTF-8, or malformed JSON. */
#define WS_ERR_ARGUMENT 1
/* The library rejected the construction or input word. */
#define WS_ERR_DOMAIN 2
/* The evaluation ran but the claimed separation did not hold. */
#define WS_ERR_VIOLATED 3
/* A panic was trapped at the boundary. */
#define WS_ERR_PANIC 4

/* Opaque machine handle. */
typedef struct WsMachine WsMachine;

/* Semantic version of the library. Borrowed static string; do not free. */
const char *ws_version(void);

/* Message for the most recent failure on this thread. Borrowed; valid
 * until the next library call on the same thread. Never null. */
const char *ws_last_error(void);

/* Release a string returned through a char** output parameter. */
void ws_string_free(char *s);

/* Build a machine from a JSON spec and store the handle in *out.
 *
 * Specs (words use letters a, b, c, ... or digits 0, 1, 2, ...):
 *   {"model":"mcqfa-rotation","d":1,"t":2}
 *       unary 2-state unitary counter: accepts a^d, rejects a^(d+t)
 *   {"model":"mcqfa-swap"}
 *       the fixed 2-state machine separating ba from ab exactly
 *   {"model":"afa-subtract","d":1,"t":2}
 *       unary 2-state affine counter, exact
 *   {"model":"afa-exact","x":"ab","y":"ba"}
 *       2-state affine machine: accept(x)=1, accept(y)=0, exactly
 *   {"model":"afa-bounded","x":"a","alphabet":2,"k":100}
 *       2-state affine: accept(x)=1, accept(z≠x) <= (k+1)/(2k+1)
 *   {"model":"afa-3state","x":"a","alphabet":2,"k":100}
 *       3-state affine: accept(x)=1, accept(z≠x) <= 2/(2k+1)
 *   {"model":"afa-set-exact","x":"a","set":["ab","ba"]}
 *       accept(x)=1 and accept(y)=0 for every y in the set, exactly
 *   {"model":"afa-set-bounded","set":["a","b"],"k":100,"sharpen":true}
 *       members accept exactly 1, non-members <= 2/(2k+1)
 *   {"model":"nondet","set":["a","b"]}
 *       2^{|set|}-state float unitary machine: members 0, others > 0
 *   {"model":"nondet-exact","set":["a","b"]}
 *       3^{|set|}-state exact rational machine: members 0, others > 0
 *
 * "alphabet" and "k" default to 2 and 1; "sharpen" defaults to true.
 */
int32_t ws_machine_build(const char *spec_json, WsMachine **out);

/* Serialize the machine (states, transitions, end marker, acceptance set)
 * to its JSON schema ("schema":1). */
int32_t ws_machine_describe(const WsMachine *machine, char **out_json);

/* Run one word: {"word":"ab","value":"1","approx":1.0}. "value" is the
 * exact fraction on rational backends, a decimal on the float backend. */
int32_t ws_machine_accept(const WsMachine *machine, const char *word,
                          char **out_json);

/* Verify a separation claim. Request:
 *   {"accept":["ab"],"reject":["ba"],"mode":"exact"}
 * Modes: "exact" (accept exactly 1, reject exactly 0; default),
 *        "nondet" (accept nonzero, reject exactly zero),
 *        "bounded" with "bound":"2/201" (accept 1, reject <= bound).
 * Optional "tol" and "nonzero_min" tune the float backend's thresholds.
 * Returns WS_OK when the claim held, WS_ERR_VIOLATED when it ran but did
 * not; the report JSON is written either way. */
int32_t ws_machine_evaluate(const WsMachine *machine, const char *request_json,
                            char **out_json);

/* Release a machine handle. */
void ws_machine_free(WsMachine *machine);

/* Classify a pair of words:
 *   {"x":"ab","y":"ba","class":"hard","reduction":{"x":"ab","y":"ba"}}
 *   {"x":"a","y":"aa","class":"easy","witness":"a"}
 * Easy means some letter's count differs between the words. */
int32_t ws_classify(const char *x, const char *y, char **out_json);

/* Smallest DFA with at most n_max states sending x and y to different
 * states: {"size":2,"table":[0,1,0,0]} (row-major transition table), with
 * nulls when no such DFA exists within the bound. */
int32_t ws_dfa_min(const char *x, const char *y, uint32_t n_max,
                   char **out_json);

/* Coordinate-search estimate of the largest rotation angle the pair's
 * quotient word map attains on SU(2):
 *   {"omega":"a b A B","alpha_hat":3.14159,...}
 * Deterministic for a fixed seed; alpha_hat never exceeds pi. */
int32_t ws_wordmap_estimate(const char *x, const char *y, uint32_t restarts,
                            uint32_t iterations, uint64_t seed,
                            char **out_json);

/* Estimate the angle and, when it clears a quarter turn, build the 2-state
 * unitary certificate machine separating the pair with one-sided error
 * <= 1e-6. Writes the machine handle and a JSON summary with the residual.
 * Fails with WS_ERR_DOMAIN when the estimate stays below a quarter turn. */
int32_t ws_certificate_build(const char *x, const char *y, uint32_t restarts,
                             uint32_t iterations, uint64_t seed,
                             WsMachine **out_machine, char **out_json);

#ifdef __cplusplus
}
#endif

#endif /* WORDSEP_H */
