#pragma once

#include "ppcf/checks.hpp"
#include "ppcf/context.hpp"
#include "ppcf/denot.hpp"
#include "ppcf/error.hpp"
#include "ppcf/fullabs.hpp"
#include "ppcf/interpolation.hpp"
#include "ppcf/operational.hpp"
#include "ppcf/parser.hpp"
#include "ppcf/pcs.hpp"
#include "ppcf/pretty.hpp"
#include "ppcf/rational.hpp"
#include "ppcf/stdlib.hpp"
#include "ppcf/term.hpp"
#include "ppcf/type.hpp"
#include "ppcf/typecheck.hpp"
