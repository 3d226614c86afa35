#pragma once

// Everything: the MinJ language, the register kernel, the three mechanisms,
// and the file front end. Pull in individual headers instead if you only
// need one layer.

#include "crx/error.hpp"
#include "crx/stepbudget.hpp"

#include "crx/minj/ast.hpp"
#include "crx/minj/computation.hpp"
#include "crx/minj/eval.hpp"
#include "crx/minj/lexer.hpp"
#include "crx/minj/parser.hpp"
#include "crx/minj/printer.hpp"
#include "crx/minj/trace.hpp"
#include "crx/minj/value.hpp"
#include "crx/minj/wellformed.hpp"

#include "crx/kernel/composed.hpp"
#include "crx/kernel/concern.hpp"
#include "crx/kernel/plan.hpp"
#include "crx/kernel/process.hpp"
#include "crx/kernel/provenance.hpp"
#include "crx/kernel/register.hpp"

#include "crx/cmp/clause.hpp"
#include "crx/cmp/expand.hpp"
#include "crx/cmp/hyperspace.hpp"
#include "crx/cmp/specs.hpp"
#include "crx/cmp/weave.hpp"

#include "crx/pa/match.hpp"
#include "crx/pa/mix.hpp"
#include "crx/pa/pointcut.hpp"
#include "crx/pa/run.hpp"

#include "crx/oc/effect.hpp"
#include "crx/oc/gen.hpp"
#include "crx/oc/weave.hpp"

#include "crx/frontend/aspect.hpp"
#include "crx/frontend/inputs.hpp"
