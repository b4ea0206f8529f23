use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("matrix does not define a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("generator does not lie in the ambient group: {0}")]
    GeneratorOutsideAmbient(String),
    #[error("map is not tame")]
    NotTame,
    #[error("group is not a lattice (has torsion)")]
    NonLattice,
    #[error("inclusion does not have finite index")]
    NotFiniteIndex,
    #[error("cone piece is not contained in the target cone")]
    PieceOutsideTarget,
    #[error("cone is not a face")]
    NotAFace,
    #[error("monoid is not sharp")]
    NotSharp,
    #[error("ambient group has torsion")]
    TorsionAmbient,
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("cone is not in the fan")]
    ConeNotInFan,
    #[error("cokernel of the group map is infinite")]
    InfiniteCokernel,
    #[error("GS fan is not foldable")]
    NotFoldable,
    #[error("preconditions fail: {0}")]
    PreconditionsFail(String),
    #[error("free rank {0} is too high to draw (at most 2)")]
    RankTooHigh(usize),
    #[error("invalid KM fan: {0}")]
    InvalidFan(String),
    #[error("not a map of KM fans: {0}")]
    InvalidMorphism(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
