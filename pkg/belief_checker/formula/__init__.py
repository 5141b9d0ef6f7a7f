from .ast import (
    AgentSet,
    Alw,
    And,
    Atom,
    Believes,
    Chi,
    Common,
    CommonA,
    CommonT,
    COMMON_NODES,
    Everyone,
    EveryoneA,
    EveryoneT,
    Formula,
    GroupName,
    GroupRef,
    Implies,
    Not,
    Or,
    RUN_PROPERTY_NODES,
    conjunction,
    everyone_of,
    render,
    subformulas,
)
from .parser import parse
