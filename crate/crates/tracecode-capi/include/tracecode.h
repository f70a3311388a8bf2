#ifndef TRACECODE_H
#define TRACECODE_H

/* Generated by cbindgen from tracecode-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome; `Ok` is zero, every failure is nonzero.
 */
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  /**
   * The decoder gave a negative answer (error budget exceeded, no
   * surviving candidate). Not a usage error.
   */
  TC_STATUS_DECODE_FAILURE = 1,
  /**
   * A parameter or message is outside its documented domain.
   */
  TC_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Malformed serialized input: config, bundle JSON, 01-string, or
   * symbol list.
   */
  TC_STATUS_FORMAT = 3,
  /**
   * A randomized construction ran out of attempts.
   */
  TC_STATUS_CONSTRUCTION_FAILED = 4,
  TC_STATUS_IO = 5,
  /**
   * A required pointer argument was NULL.
   */
  TC_STATUS_NULL_POINTER = 6,
  /**
   * A string argument was not valid UTF-8.
   */
  TC_STATUS_INVALID_UTF8 = 7,
  /**
   * The call panicked. State is still memory-safe but the handle
   * should be freed and rebuilt.
   */
  TC_STATUS_PANIC = 8,
} TcStatus;

/**
 * Opaque codec bundle.
 */
typedef struct TcCodec TcCodec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *tc_version(void);

/**
 * Message for this thread's most recent failure, or NULL if none.
 * Borrowed; overwritten by the next failing call on the same thread.
 */
const char *tc_last_error(void);

/**
 * Frees a string returned through a `char **out` parameter. NULL is a
 * no-op.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void tc_string_free(char *s);

/**
 * Builds a codec from experiment-config text (TOML or JSON; same schema
 * as the CLI). The config's first `q`/`t` grid point and its seed drive
 * the construction.
 *
 * # Safety
 * `config` must be a NUL-terminated string; `out` must be writable.
 */
enum TcStatus tc_codec_build(const char *config, struct TcCodec **out);

/**
 * Restores a codec from bundle JSON produced by [`tc_codec_to_json`] or
 * the CLI's `build-codec`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum TcStatus tc_codec_from_json(const char *json, struct TcCodec **out);

/**
 * Serializes a codec to its bundle JSON.
 *
 * # Safety
 * `codec` must be a live handle; `out` must be writable. Free the
 * result with [`tc_string_free`].
 */
enum TcStatus tc_codec_to_json(const struct TcCodec *codec, char **out);

/**
 * Static name of the codec kind ("bigalpha", "binary", "inner",
 * "runcode", "avgcase"), or NULL for a NULL handle. Do not free.
 *
 * # Safety
 * `codec` must be NULL or a live handle.
 */
const char *tc_codec_kind(const struct TcCodec *codec);

/**
 * The deletion probability the codec was built for, or NaN when the
 * codec stores none (inner, avgcase) or the handle is NULL.
 *
 * # Safety
 * `codec` must be NULL or a live handle.
 */
double tc_codec_q(const struct TcCodec *codec);

/**
 * Destroys a codec handle. NULL is a no-op.
 *
 * # Safety
 * `codec` must come from this library and not be freed twice.
 */
void tc_codec_free(struct TcCodec *codec);

/**
 * Encodes a text message to a text codeword.
 *
 * # Safety
 * `codec` must be a live handle; `message` a NUL-terminated string;
 * `out` writable. Free the result with [`tc_string_free`].
 */
enum TcStatus tc_encode(const struct TcCodec *codec, const char *message, char **out);

/**
 * Decodes traces (one per line, trailing newline optional) back to the
 * text message. Pass a negative or NaN `q` to use the codec's own
 * deletion probability.
 *
 * # Safety
 * `codec` must be a live handle; `traces` a NUL-terminated string;
 * `out` writable. Free the result with [`tc_string_free`].
 */
enum TcStatus tc_decode(const struct TcCodec *codec, const char *traces, double q, char **out);

/**
 * Encodes `message` and samples `t` independent channel traces, one per
 * output line. Pass a negative or NaN `q` to use the codec's own
 * deletion probability. Deterministic in `seed`.
 *
 * # Safety
 * `codec` must be a live handle; `message` a NUL-terminated string;
 * `out` writable. Free the result with [`tc_string_free`].
 */
enum TcStatus tc_simulate(const struct TcCodec *codec,
                          const char *message,
                          size_t t,
                          double q,
                          uint64_t seed,
                          char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TRACECODE_H */
