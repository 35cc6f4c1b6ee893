// SPDX-License-Identifier: Apache-2.0
//
// mmwsim - drop-based mmWave channel and end-to-end link simulator
// Copyright (C) 2026 mmwsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MMWSIM_MMWSIM_H
#define MMWSIM_MMWSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MMWSIM_BUILDING_LIBRARY)
#    define MMWSIM_API __declspec(dllexport)
#  else
#    define MMWSIM_API __declspec(dllimport)
#  endif
#else
#  define MMWSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns one of these. On failure a message describing
 * the problem is available from mmw_last_error() on the calling thread. */
typedef enum mmw_status {
    MMW_OK = 0,
    MMW_ERR_INVALID_PARAMETER = 1,
    MMW_ERR_INVALID_DISTANCE = 2,
    MMW_ERR_UNSUPPORTED_SCENARIO = 3,
    MMW_ERR_OUT_OF_RANGE = 4,
    MMW_ERR_INVALID_ARRAY = 5,
    MMW_ERR_INVALID_INPUT = 6,
    MMW_ERR_IO = 7,
    MMW_ERR_INCOMPLETE_CAMPAIGN = 8,
    MMW_ERR_GENERATION = 9,
    MMW_ERR_UNDEFINED_LATENCY = 10,
    MMW_ERR_NULL_ARGUMENT = 11,
    MMW_ERR_INTERNAL = 12
} mmw_status;

typedef enum mmw_table_format {
    MMW_TABLE_TEXT = 0,
    MMW_TABLE_CSV = 1
} mmw_table_format;

/* Opaque handles. */
typedef struct mmw_config mmw_config;
typedef struct mmw_campaign mmw_campaign;

MMWSIM_API const char* mmw_version(void);
MMWSIM_API const char* mmw_status_string(mmw_status status);
/* Message of the last failed call on this thread, "" if none. */
MMWSIM_API const char* mmw_last_error(void);

/* Campaign configuration in `key = value` form. */
MMWSIM_API mmw_status mmw_config_load(const char* path, mmw_config** out);
MMWSIM_API mmw_status mmw_config_from_string(const char* text, mmw_config** out);
MMWSIM_API mmw_status mmw_config_set(mmw_config* cfg, const char* key, const char* value);
MMWSIM_API mmw_status mmw_config_has(const mmw_config* cfg, const char* key, int* out);
MMWSIM_API mmw_status mmw_config_set_seed(mmw_config* cfg, uint64_t seed);
MMWSIM_API void mmw_config_free(mmw_config* cfg);

/* Runs the whole grid. out_dir may be NULL to use the configured output_dir
 * (or to skip writing when none is configured); workers <= 0 keeps the
 * configured worker count. */
MMWSIM_API mmw_status mmw_run_campaign(const mmw_config* cfg, const char* out_dir, int workers,
                                       mmw_campaign** out);
MMWSIM_API mmw_status mmw_campaign_record_count(const mmw_campaign* campaign, size_t* out);
MMWSIM_API mmw_status mmw_campaign_table(const mmw_campaign* campaign, mmw_table_format format, char** out);
MMWSIM_API void mmw_campaign_free(mmw_campaign* campaign);

/* Post-processing of a results directory written by mmw_run_campaign.
 * Returned strings are owned by the caller and released with mmw_string_free. */
MMWSIM_API mmw_status mmw_table_from_dir(const char* dir, mmw_table_format format, char** out);
MMWSIM_API mmw_status mmw_ecdf_from_dir(const char* dir, const char* metric, char** out);
MMWSIM_API void mmw_string_free(char* s);

/* Stand-alone model evaluations. */
MMWSIM_API mmw_status mmw_los_probability(const char* scenario, const char* channel_model, double d2d_m,
                                          double h_ue_m, double* out);
MMWSIM_API mmw_status mmw_phy_throughput_mbps(double tb_bytes, double slot_duration_s, double* out);
MMWSIM_API mmw_status mmw_interpolate_param(double p28, double p140, double frequency_ghz, double* out);

#ifdef __cplusplus
}
#endif

#endif
