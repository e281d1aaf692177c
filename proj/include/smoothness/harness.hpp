#pragma once

// Verification harness; needs vendor/json.hpp on the include path.
#include "smoothness/harness/checks.hpp"
#include "smoothness/harness/config.hpp"
#include "smoothness/harness/corpus.hpp"
#include "smoothness/harness/lemma_suite.hpp"
#include "smoothness/harness/report.hpp"
#include "smoothness/harness/tables.hpp"
#include "smoothness/harness/theorem_sweep.hpp"
