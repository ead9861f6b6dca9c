// SPDX-License-Identifier: Apache-2.0

#ifndef BDSPEC_BDSPEC_HPP
#define BDSPEC_BDSPEC_HPP

#include "bdspec/birth_death.hpp"
#include "bdspec/bounds.hpp"
#include "bdspec/chain_spec.hpp"
#include "bdspec/errors.hpp"
#include "bdspec/estimates.hpp"
#include "bdspec/oracle.hpp"
#include "bdspec/shooting.hpp"
#include "bdspec/solvers.hpp"
#include "bdspec/spectral_analysis.hpp"
#include "bdspec/weighted_path.hpp"

#endif // BDSPEC_BDSPEC_HPP
