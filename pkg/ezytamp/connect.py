import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import openai
from dotenv import find_dotenv, load_dotenv

from ezytamp.errors import BackendError, InputError

dotenv_path = find_dotenv(usecwd=True)
load_dotenv(dotenv_path=dotenv_path)

logger = logging.getLogger(__name__)

LLM_ENDPOINT = os.getenv("LLM_ENDPOINT") or None
"""Environment variable for chat-completion base URL."""
LLM_API_KEY = os.getenv("LLM_API_KEY") or None
"""Environment variable for chat-completion API key."""
LLM_MODEL = os.getenv("LLM_MODEL") or None
"""Environment variable for chat-completion model name."""


@dataclass
class LLMClient:
    """Chat-completion client bound to one model."""

    client: Any
    model: str

    def chat(self, messages: List[Dict[str, str]], temperature: float) -> str:
        """Send messages and return the text of the first choice.

        Raises
        ------
        BackendError
            On any transport or API failure.
        """
        try:
            response = self.client.chat.completions.create(
                model=self.model,
                messages=messages,
                temperature=temperature,
            )
        except openai.OpenAIError as e:
            msg = f"Chat completion failed: {e}"
            raise BackendError(msg) from e
        try:
            return response.choices[0].message.content or ""
        except (AttributeError, IndexError) as e:
            msg = "Chat completion returned no choices"
            raise BackendError(msg) from e


def connect_llm(
    endpoint: Optional[str] = None,
    api_key: Optional[str] = None,
    model: Optional[str] = None,
) -> LLMClient:
    """Connect to an OpenAI-compatible chat-completion endpoint.

    Parameters
    ----------
    endpoint: Optional[str]
        Base URL, default ``LLM_ENDPOINT``.
    api_key: Optional[str]
        API key, default ``LLM_API_KEY``.
    model: Optional[str]
        Model name, default ``LLM_MODEL``.
    """
    endpoint = endpoint or LLM_ENDPOINT
    api_key = api_key or LLM_API_KEY
    model = model or LLM_MODEL
    if not model:
        msg = "LLM_MODEL is not set"
        raise InputError(msg)
    if not api_key:
        msg = "LLM_API_KEY is not set"
        raise InputError(msg)

    logger.info("Connecting to chat-completion endpoint %s", endpoint or "(default)")
    client = openai.OpenAI(base_url=endpoint, api_key=api_key)
    return LLMClient(client=client, model=model)
