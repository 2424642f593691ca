/* C interface for the dctmark image watermarking library. */

#ifndef DCTMARK_H
#define DCTMARK_H

/* Generated from the Rust sources by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Placement anchor for the visible overlay.
 */
typedef enum WmAnchor {
  WM_ANCHOR_TOP_LEFT = 0,
  WM_ANCHOR_TOP_CENTER,
  WM_ANCHOR_TOP_RIGHT,
  WM_ANCHOR_MIDDLE_LEFT,
  WM_ANCHOR_MIDDLE_CENTER,
  WM_ANCHOR_MIDDLE_RIGHT,
  WM_ANCHOR_BOTTOM_LEFT,
  WM_ANCHOR_BOTTOM_CENTER,
  WM_ANCHOR_BOTTOM_RIGHT,
} WmAnchor;

/**
 * Result code of every fallible call in this interface.
 */
typedef enum WmStatus {
  /**
   * The call succeeded.
   */
  WM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  WM_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  WM_STATUS_INVALID_UTF8 = 2,
  /**
   * A file could not be read, decoded, or written.
   */
  WM_STATUS_IO = 3,
  /**
   * An argument value is outside its documented range or could not be parsed.
   */
  WM_STATUS_INVALID_ARGUMENT = 4,
  /**
   * Two images that must agree in size or channel layout do not.
   */
  WM_STATUS_DIMENSION_MISMATCH = 5,
  /**
   * The watermark payload exceeds the cover image's capacity.
   */
  WM_STATUS_CAPACITY_EXCEEDED = 6,
} WmStatus;

/**
 * Opaque image handle.
 */
typedef struct WmImage WmImage;

/**
 * Bounds for the adaptive visible-embedding factors. Pass null where a
 * `*const WmFactorConfig` is accepted to use the built-in defaults
 * (0.95, 0.98, 0.05, 0.17).
 */
typedef struct WmFactorConfig {
  double alpha_min;
  double alpha_max;
  double beta_min;
  double beta_max;
} WmFactorConfig;

/**
 * Outcome of an authentication run.
 */
typedef struct WmAuthResult {
  /**
   * Fraction of reliable embedding positions whose extracted bit matched.
   */
  double match_fraction;
  /**
   * Number of reliable positions that contributed to the fraction.
   */
  uint64_t reliable_count;
  /**
   * Threshold the verdict was taken against.
   */
  double threshold;
  /**
   * True when the suspect image carries the expected watermark.
   */
  bool authentic;
} WmAuthResult;

/**
 * Distortion between two images of equal geometry.
 */
typedef struct WmQuality {
  /**
   * Mean squared error over all samples.
   */
  double mse;
  /**
   * Peak signal-to-noise ratio in dB; +infinity for identical images.
   */
  double psnr_db;
} WmQuality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the message of the most recent failure on the calling thread, or
 * an empty string when there has been none.
 */
const char *wm_last_error(void);

/**
 * Decodes a PNG, JPEG, or BMP file into a new image handle.
 */
enum WmStatus wm_image_load(const char *path, struct WmImage **out);

/**
 * Creates a constant-filled image with 1 (gray) or 3 (RGB) channels.
 */
enum WmStatus wm_image_new(uint32_t width,
                           uint32_t height,
                           uint32_t channels,
                           uint8_t fill,
                           struct WmImage **out);

/**
 * Writes the image as a PNG file, whatever the path's extension.
 */
enum WmStatus wm_image_save(const struct WmImage *img, const char *path);

/**
 * Width in pixels; 0 when the handle is null.
 */
uint32_t wm_image_width(const struct WmImage *img);

/**
 * Height in pixels; 0 when the handle is null.
 */
uint32_t wm_image_height(const struct WmImage *img);

/**
 * Samples per pixel (1 or 3); 0 when the handle is null.
 */
uint32_t wm_image_channels(const struct WmImage *img);

/**
 * Total number of samples (width * height * channels).
 */
uint64_t wm_image_sample_count(const struct WmImage *img);

/**
 * Read-only pointer to the sample data, valid until the handle is freed or
 * mutated; null when the handle is null.
 */
const uint8_t *wm_image_samples(const struct WmImage *img);

/**
 * Mutable pointer to the sample data; null when the handle is null.
 */
uint8_t *wm_image_samples_mut(struct WmImage *img);

/**
 * Releases an image handle; null is ignored.
 */
void wm_image_free(struct WmImage *img);

/**
 * Overlays a translucent watermark on the cover with per-block adaptive
 * strength. `target_width`/`target_height` of 0 keep the watermark's natural
 * size (it is always shrunk to fit the cover); `intensity` runs 1 (faint) to
 * 100 (strong); `factors` may be null for the defaults.
 */
enum WmStatus wm_embed_visible(const struct WmImage *cover,
                               const struct WmImage *watermark,
                               enum WmAnchor anchor,
                               uint32_t target_width,
                               uint32_t target_height,
                               uint32_t intensity,
                               const struct WmFactorConfig *factors,
                               struct WmImage **out);

/**
 * Hides `watermark` (binarized at intensity 128) in the cover under `key`.
 * Pass 0 for `alpha_dc` or `alpha_ac` to use the defaults (0.02 and 0.1).
 */
enum WmStatus wm_embed_invisible(const struct WmImage *cover,
                                 const struct WmImage *watermark,
                                 const char *key,
                                 double alpha_dc,
                                 double alpha_ac,
                                 struct WmImage **out);

/**
 * Checks whether `suspect` carries `watermark` embedded under `key`, given
 * the unwatermarked `original`. Pass 0 for `threshold` to use the default
 * (0.85). The verdict lands in `result`.
 */
enum WmStatus wm_authenticate(const struct WmImage *suspect,
                              const struct WmImage *original,
                              const struct WmImage *watermark,
                              const char *key,
                              double threshold,
                              struct WmAuthResult *result);

/**
 * Mean squared error and PSNR between two images of equal geometry.
 */
enum WmStatus wm_quality(const struct WmImage *a,
                         const struct WmImage *b,
                         struct WmQuality *result);

/**
 * Applies a robustness attack described the same way as on the command
 * line: `"<kind> key=value ..."`, with comma-separated steps forming a
 * composite, e.g. `"jpeg quality=75"` or `"blur radius=1, jpeg quality=75"`.
 */
enum WmStatus wm_attack(const struct WmImage *img, const char *spec, struct WmImage **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DCTMARK_H */
