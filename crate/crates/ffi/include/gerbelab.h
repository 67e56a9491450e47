#ifndef GERBELAB_H
#define GERBELAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GlStatus {
  GL_STATUS_OK = 0,
  /**
   * The check ran and its answer is no.
   */
  GL_STATUS_FALSE = 1,
  GL_STATUS_NULL_ARGUMENT = 2,
  GL_STATUS_INVALID_UTF8 = 3,
  /**
   * Malformed text or a dangling reference inside the document.
   */
  GL_STATUS_DOCUMENT = 4,
  /**
   * The text parsed but a section failed its validator.
   */
  GL_STATUS_VALIDATION = 5,
  /**
   * A name passed to the call does not exist in the document.
   */
  GL_STATUS_NOT_FOUND = 6,
  /**
   * A precondition of the operation failed, e.g. the search bound.
   */
  GL_STATUS_PRECONDITION = 7,
  GL_STATUS_PANIC = 8,
} GlStatus;

typedef struct GlDocument GlDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *gl_last_error(void);

/**
 * Parses and validates a document. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GlStatus gl_document_parse(const char *text, struct GlDocument **out);

/**
 * # Safety
 * `doc` must be null or a handle from `gl_document_parse` not yet freed.
 */
void gl_document_free(struct GlDocument *doc);

/**
 * # Safety
 * `doc` must be a live handle and `out` a valid pointer.
 */
enum GlStatus gl_document_section_count(const struct GlDocument *doc, size_t *out);

/**
 * The canonical text of the document; free it with `gl_string_free`.
 *
 * # Safety
 * `doc` must be a live handle and `out` a valid pointer.
 */
enum GlStatus gl_document_serialize(const struct GlDocument *doc, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void gl_string_free(char *s);

/**
 * Order of the automorphism group of the named group.
 *
 * # Safety
 * `doc` must be a live handle, `group` a NUL-terminated string and `out`
 * a valid pointer.
 */
enum GlStatus gl_automorphism_count(const struct GlDocument *doc, const char *group, size_t *out);

/**
 * Number of H¹ classes of `xmod` on `cover`, honouring
 * `GERBE_MAX_SEARCH`.
 *
 * # Safety
 * `doc` must be a live handle, the names NUL-terminated strings and `out`
 * a valid pointer.
 */
enum GlStatus gl_h1_class_count(const struct GlDocument *doc,
                                const char *xmod,
                                const char *cover,
                                size_t *out);

/**
 * `Ok` iff extracting the extension built from the cocycle gives it back.
 *
 * # Safety
 * `doc` must be a live handle and `cocycle` a NUL-terminated string.
 */
enum GlStatus gl_cocycle_roundtrip(const struct GlDocument *doc, const char *cocycle);

/**
 * `Ok` if the two extensions are Morita equivalent, `False` if not.
 *
 * # Safety
 * `doc` must be a live handle and the names NUL-terminated strings.
 */
enum GlStatus gl_extensions_equivalent(const struct GlDocument *doc,
                                       const char *ext1,
                                       const char *ext2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GERBELAB_H */
