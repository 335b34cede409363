from .class_labels import ClassLabel, ClassTag, Membership, MembershipStatus
