/*
 * Copyright 2026 The TIAM Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the TIAM toolkit.
 *
 * Every function returns a tiam_status. On failure a message is available from
 * tiam_last_error() on the calling thread until the next failing call there.
 * Strings returned through `const char**` are owned by the handle they came
 * from and stay valid until the handle is destroyed or the same accessor is
 * called again.
 */

#ifndef TIAM_TIAM_H_
#define TIAM_TIAM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TIAM_BUILDING_LIBRARY)
#define TIAM_API __declspec(dllexport)
#else
#define TIAM_API __declspec(dllimport)
#endif
#else
#define TIAM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tiam_status {
  TIAM_OK = 0,
  TIAM_ERR_VALIDATION = 1, /* bad input data or configuration */
  TIAM_ERR_IO = 2,         /* file could not be read or written */
  TIAM_ERR_ARGUMENT = 3,   /* NULL handle, unknown command, index out of range */
  TIAM_ERR_INTERNAL = 4
} tiam_status;

typedef struct tiam_session tiam_session;
typedef struct tiam_template tiam_template;
typedef struct tiam_palette tiam_palette;

TIAM_API const char* tiam_version(void);
TIAM_API const char* tiam_status_name(tiam_status status);
TIAM_API const char* tiam_last_error(void);
/* Fine-grained error kind of the last failure, e.g. "schema" or "empty_mask". */
TIAM_API const char* tiam_last_error_kind(void);

/* ---- sessions: configuration plus file-level commands ---- */

TIAM_API tiam_status tiam_session_create(tiam_session** out);
TIAM_API void tiam_session_destroy(tiam_session* session);

/* Explicit options win over the config file regardless of call order. */
TIAM_API tiam_status tiam_session_set_option(tiam_session* session, const char* key, const char* value);
TIAM_API tiam_status tiam_session_load_config(tiam_session* session, const char* path);
/* Effective configuration as a JSON object. */
TIAM_API tiam_status tiam_session_config_json(tiam_session* session, const char** out);

/* command: "generate", "validate", "score", "report", "mds" or "seeds". */
TIAM_API tiam_status tiam_session_run(tiam_session* session, const char* command);

/* Results of the last successful run. */
TIAM_API size_t tiam_session_warning_count(const tiam_session* session);
TIAM_API const char* tiam_session_warning(const tiam_session* session, size_t index);
TIAM_API size_t tiam_session_output_count(const tiam_session* session);
TIAM_API const char* tiam_session_output(const tiam_session* session, size_t index);
TIAM_API const char* tiam_session_summary_json(const tiam_session* session);

/* ---- templates ---- */

TIAM_API tiam_status tiam_template_load(const char* path, tiam_template** out);
TIAM_API tiam_status tiam_template_parse(const char* json_text, tiam_template** out);
TIAM_API void tiam_template_destroy(tiam_template* tpl);
TIAM_API tiam_status tiam_template_count(const tiam_template* tpl, uint64_t* out);
/* Materializes the prompts; tiam_template_prompt reads them by index. */
TIAM_API tiam_status tiam_template_enumerate(tiam_template* tpl, size_t* n_out);
TIAM_API tiam_status tiam_template_prompt(const tiam_template* tpl, size_t index, const char** prompt_id,
                                          const char** text);

/* ---- colors and masks ---- */

TIAM_API tiam_status tiam_palette_load(const char* path, tiam_palette** out);
TIAM_API void tiam_palette_destroy(tiam_palette* palette);
TIAM_API tiam_status tiam_palette_classify(const tiam_palette* palette, uint8_t r, uint8_t g, uint8_t b,
                                           const char** name);
/* Fraction of the pixels (n triples, rgb interleaved) nearest to `target`. */
TIAM_API tiam_status tiam_palette_binding(const tiam_palette* palette, const uint8_t* rgb, size_t n,
                                          const char* target, double threshold, double* proportion,
                                          int* success);

TIAM_API tiam_status tiam_srgb_to_lab(uint8_t r, uint8_t g, uint8_t b, double lab[3]);

/* IoU of two column-major uncompressed RLE masks of the same size. */
TIAM_API tiam_status tiam_rle_iou(int width, int height, const uint32_t* counts_a, size_t n_a,
                                  const uint32_t* counts_b, size_t n_b, double* out);

#ifdef __cplusplus
}
#endif

#endif /* TIAM_TIAM_H_ */
