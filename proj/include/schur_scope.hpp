#pragma once

#include "schur_scope/errors.hpp"
#include "schur_scope/parallel.hpp"
#include "schur_scope/polynomial.hpp"
#include "schur_scope/symbol.hpp"
#include "schur_scope/quadrature.hpp"
#include "schur_scope/geometry.hpp"
#include "schur_scope/nevanlinna.hpp"
#include "schur_scope/carleson.hpp"
#include "schur_scope/identities.hpp"
#include "schur_scope/orlicz.hpp"
#include "schur_scope/symbol_io.hpp"
