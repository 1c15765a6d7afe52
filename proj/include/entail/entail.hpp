#pragma once

// Umbrella header for the whole library.

#include "entail/cnf.hpp"
#include "entail/evidence.hpp"
#include "entail/harness.hpp"
#include "entail/kbl.hpp"
#include "entail/lexical.hpp"
#include "entail/lint.hpp"
#include "entail/logic.hpp"
#include "entail/metrics.hpp"
#include "entail/ontology.hpp"
#include "entail/solver.hpp"
#include "entail/text.hpp"
#include "entail/verifier.hpp"
