#pragma once

#include "mutdafny/mutator.hpp"
#include "mutdafny/operators.hpp"
#include "mutdafny/parser.hpp"
#include "mutdafny/printer.hpp"
#include "mutdafny/report.hpp"
#include "mutdafny/resolver.hpp"
#include "mutdafny/scanner.hpp"
#include "mutdafny/score.hpp"
#include "mutdafny/source.hpp"
#include "mutdafny/token.hpp"
#include "mutdafny/types.hpp"
#include "mutdafny/verifier.hpp"
