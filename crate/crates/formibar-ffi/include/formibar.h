#ifndef FORMIBAR_H
#define FORMIBAR_H

/* Generated by cbindgen from crates/formibar-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum FbStatus {
  FB_STATUS_OK = 0,
  FB_STATUS_NULL_POINTER = 1,
  FB_STATUS_INVALID_UTF8 = 2,
  FB_STATUS_PARSE = 3,
  FB_STATUS_INVALID = 4,
  FB_STATUS_UNIVERSE_MISMATCH = 5,
  FB_STATUS_UNKNOWN_ELEMENT = 6,
  FB_STATUS_PRECONDITION = 7,
  FB_STATUS_EMPTY_INTERVAL = 8,
  FB_STATUS_SIZE_BOUND = 9,
  FB_STATUS_NOT_PIECEWISE_LINEAR = 10,
  FB_STATUS_PANIC = 11,
} FbStatus;

// A multiset of intervals.
typedef struct FbBarcode FbBarcode;

// A dynamic metric space.
typedef struct FbDms FbDms;

// A formigram: a timeline of sub-partitions.
typedef struct FbFormigram FbFormigram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer stays
// valid until the next call into this library on the same thread.
const char *fb_last_error_message(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void fb_string_free(char *s);

// Parses and validates formigram JSON.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum FbStatus fb_formigram_from_json(const char *json, struct FbFormigram **out);

// Parses a dynamic graph and returns its formigram of connected components.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum FbStatus fb_formigram_from_dg_json(const char *json, struct FbFormigram **out);

// Serializes a formigram to JSON.
//
// # Safety
// `f` must be a live handle and `out` a writable pointer.
enum FbStatus fb_formigram_to_json(const struct FbFormigram *f, char **out);

// Releases a formigram. NULL is ignored.
//
// # Safety
// `f` must come from this library and not have been freed.
void fb_formigram_free(struct FbFormigram *f);

// Smooths a formigram by `eps`, given as a decimal or `p/q` string.
//
// # Safety
// `f` must be a live handle, `eps` a NUL-terminated string and `out` a
// writable pointer.
enum FbStatus fb_formigram_smooth(const struct FbFormigram *f,
                                  const char *eps,
                                  struct FbFormigram **out);

// Computes the zigzag barcode of a formigram.
//
// # Safety
// `f` must be a live handle and `out` a writable pointer.
enum FbStatus fb_formigram_barcode(const struct FbFormigram *f, struct FbBarcode **out);

// Exact interleaving distance between two formigrams.
//
// # Safety
// `a` and `b` must be live handles and `out` a writable pointer.
enum FbStatus fb_formigram_interleaving(const struct FbFormigram *a,
                                        const struct FbFormigram *b,
                                        char **out);

// Parses barcode JSON.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum FbStatus fb_barcode_from_json(const char *json, struct FbBarcode **out);

// Serializes a barcode to JSON.
//
// # Safety
// `b` must be a live handle and `out` a writable pointer.
enum FbStatus fb_barcode_to_json(const struct FbBarcode *b, char **out);

// Number of bars counted with multiplicity, or 0 for NULL.
//
// # Safety
// `b` must be NULL or a live handle.
uintptr_t fb_barcode_len(const struct FbBarcode *b);

// Releases a barcode. NULL is ignored.
//
// # Safety
// `b` must come from this library and not have been freed.
void fb_barcode_free(struct FbBarcode *b);

// Bottleneck distance between two barcodes.
//
// # Safety
// `a` and `b` must be live handles and `out` a writable pointer.
enum FbStatus fb_bottleneck(const struct FbBarcode *a, const struct FbBarcode *b, char **out);

// Parses dynamic metric space JSON.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum FbStatus fb_dms_from_json(const char *json, struct FbDms **out);

// Releases a dynamic metric space. NULL is ignored.
//
// # Safety
// `d` must come from this library and not have been freed.
void fb_dms_free(struct FbDms *d);

// Formigram of connected components of the Rips graph at scale `delta`.
//
// # Safety
// `d` must be a live handle, `delta` a NUL-terminated string and `out` a
// writable pointer.
enum FbStatus fb_dms_rips(const struct FbDms *d, const char *delta, struct FbFormigram **out);

// Exact interleaving distance between piecewise linear dynamic metric
// spaces with slack `lambda`.
//
// # Safety
// `x` and `y` must be live handles, `lambda` a NUL-terminated string and
// `out` a writable pointer.
enum FbStatus fb_dms_interleaving(const struct FbDms *x,
                                  const struct FbDms *y,
                                  const char *lambda,
                                  char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FORMIBAR_H */
