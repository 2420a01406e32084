#pragma once

// Umbrella header.

#include "schemeforge/errors.hpp"
#include "schemeforge/group.hpp"
#include "schemeforge/scheme.hpp"
#include "schemeforge/constructors.hpp"
#include "schemeforge/algebra.hpp"
#include "schemeforge/morphisms.hpp"
#include "schemeforge/geometry.hpp"
#include "schemeforge/twist.hpp"
#include "schemeforge/io.hpp"
