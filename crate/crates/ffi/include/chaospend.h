#ifndef CHAOSPEND_H
#define CHAOSPEND_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum ChaospendStatus {
  CHAOSPEND_STATUS_OK = 0,
  CHAOSPEND_STATUS_NULL_POINTER = 1,
  CHAOSPEND_STATUS_INVALID_ARGUMENT = 2,
  CHAOSPEND_STATUS_OVERFLOW = 3,
  CHAOSPEND_STATUS_DIVIDE_BY_ZERO = 4,
  CHAOSPEND_STATUS_UNREDUCED = 5,
  CHAOSPEND_STATUS_DEGENERATE = 6,
  CHAOSPEND_STATUS_LENGTH = 7,
  CHAOSPEND_STATUS_FRAMING = 8,
  CHAOSPEND_STATUS_RANGE = 9,
  CHAOSPEND_STATUS_PANIC = 10,
} ChaospendStatus;

typedef enum ChaospendLayer {
  CHAOSPEND_LAYER_HW = 0,
  CHAOSPEND_LAYER_REF = 1,
} ChaospendLayer;

typedef enum ChaospendReseed {
  CHAOSPEND_RESEED_HALT = 0,
  CHAOSPEND_RESEED_PERTURB_COUNTER = 1,
} ChaospendReseed;

typedef enum ChaospendHmcOrder {
  CHAOSPEND_HMC_ORDER_XZY = 0,
  CHAOSPEND_HMC_ORDER_XYZ = 1,
} ChaospendHmcOrder;

/**
 * Opaque generator handle.
 */
typedef struct ChaospendGenerator ChaospendGenerator;

typedef struct ChaospendConfig {
  enum ChaospendLayer layer;
  /**
   * Raw fixed-point word for the step size.
   */
  uint32_t dt_raw;
  uint64_t warmup_steps;
  uint64_t steps_per_output;
  enum ChaospendReseed reseed;
} ChaospendConfig;

/**
 * Pendulum state as raw fixed-point words.
 */
typedef struct ChaospendState {
  uint32_t theta1;
  uint32_t theta2;
  uint32_t omega1;
  uint32_t omega2;
} ChaospendState;

typedef struct ChaospendMagSample {
  int16_t x;
  int16_t y;
  int16_t z;
} ChaospendMagSample;

/**
 * One sensor reading. ADC values are 12-bit; `mic` is sampled by the
 * on-chip ADC and `light` by the first external converter.
 */
typedef struct ChaospendSeedRecord {
  struct ChaospendMagSample mag;
  uint16_t mic;
  uint16_t light;
  uint16_t temp_hum;
} ChaospendSeedRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status.
 */
const char *chaospend_status_message(enum ChaospendStatus status);

/**
 * Library version, NUL-terminated.
 */
const char *chaospend_version(void);

/**
 * Packs sign, integer part (0-255) and hundredths (0-99) into a word.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_fix_encode(bool negative,
                                          uint32_t int_part,
                                          uint32_t hundredths,
                                          uint32_t *out);

/**
 * Signed value of any word in hundredths.
 */
int64_t chaospend_fix_decode(uint32_t raw);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_fix_plus(enum ChaospendLayer l,
                                        uint32_t a,
                                        uint32_t b,
                                        uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_fix_minus(enum ChaospendLayer l,
                                         uint32_t a,
                                         uint32_t b,
                                         uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_fix_times(enum ChaospendLayer l,
                                         uint32_t a,
                                         uint32_t b,
                                         uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_fix_divide(enum ChaospendLayer l,
                                          uint32_t a,
                                          uint32_t b,
                                          uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_fix_sin(enum ChaospendLayer l, uint32_t theta, uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_fix_cos(enum ChaospendLayer l, uint32_t theta, uint32_t *out);

/**
 * The library's default generator configuration.
 */
struct ChaospendConfig chaospend_config_default(void);

/**
 * Creates a generator. `config` may be null for the defaults. On success
 * `*out` receives a handle to release with `chaospend_generator_free`.
 *
 * # Safety
 * `config` must be null or point to a valid config; `out` must be null or
 * valid for writes.
 */
enum ChaospendStatus chaospend_generator_new(uint64_t seed,
                                             const struct ChaospendConfig *config,
                                             struct ChaospendGenerator **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must be null or a handle from `chaospend_generator_new` not yet freed.
 */
void chaospend_generator_free(struct ChaospendGenerator *g);

/**
 * Next 10-digit output.
 *
 * # Safety
 * `g` must be a live handle; `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_generator_next(struct ChaospendGenerator *g, uint64_t *out);

/**
 * Fills `buf[0..len]` with consecutive outputs. On error, `*written` (if
 * not null) holds how many were produced.
 *
 * # Safety
 * `g` must be a live handle; `buf` must be valid for `len` writes;
 * `written` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_generator_fill(struct ChaospendGenerator *g,
                                              uint64_t *buf,
                                              size_t len,
                                              size_t *written);

/**
 * Current pendulum state.
 *
 * # Safety
 * `g` must be a live handle; `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_generator_state(const struct ChaospendGenerator *g,
                                               struct ChaospendState *out);

/**
 * Pendulum steps taken, warmup included. Zero for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
uint64_t chaospend_generator_steps(const struct ChaospendGenerator *g);

/**
 * Eight link bytes, low byte first.
 *
 * # Safety
 * `out` must be null or valid for 8 writes.
 */
enum ChaospendStatus chaospend_uart_chunk(uint64_t seed, uint8_t *out);

/**
 * # Safety
 * `bytes` must be valid for `len` reads; `out` must be null or valid for
 * writes.
 */
enum ChaospendStatus chaospend_uart_unchunk(const uint8_t *bytes, size_t len, uint64_t *out);

/**
 * Decodes a six-byte magnetometer read.
 *
 * # Safety
 * `bytes` must be valid for `len` reads; `out` must be null or valid for
 * writes.
 */
enum ChaospendStatus chaospend_hmc_decode(const uint8_t *bytes,
                                          size_t len,
                                          enum ChaospendHmcOrder order,
                                          struct ChaospendMagSample *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_mcp3202_encode(uint8_t channel, uint16_t value, uint32_t *out);

/**
 * # Safety
 * `channel` and `value` must be null or valid for writes.
 */
enum ChaospendStatus chaospend_mcp3202_decode(uint32_t frame, uint8_t *channel, uint16_t *value);

/**
 * Packs a sensor reading into a 64-bit seed.
 *
 * # Safety
 * `rec` must be null or point to a valid record; `out` must be null or
 * valid for writes.
 */
enum ChaospendStatus chaospend_pack_seed(const struct ChaospendSeedRecord *rec, uint64_t *out);

/**
 * Ten-digit output for a state given as raw words.
 *
 * # Safety
 * `state` must be null or point to a valid state; `out` must be null or
 * valid for writes.
 */
enum ChaospendStatus chaospend_extract(const struct ChaospendState *state, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAOSPEND_H */
