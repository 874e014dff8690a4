"""Weighted tree automata over strong bimonoids."""
