#pragma once

#include "ifusion/colimit.hpp"
#include "ifusion/eq.hpp"
#include "ifusion/error.hpp"
#include "ifusion/fca.hpp"
#include "ifusion/institution.hpp"
#include "ifusion/prop.hpp"
#include "ifusion/sexpr.hpp"
#include "ifusion/signature.hpp"
#include "ifusion/theory.hpp"
#include "ifusion/truth.hpp"
#include "ifusion/workspace.hpp"
